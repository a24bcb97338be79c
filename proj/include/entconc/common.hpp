#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace entconc {

using cx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Mat8 = Eigen::Matrix<cx, 8, 8>;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;
using Vec8 = Eigen::Matrix<cx, 8, 1>;
using RMat4 = Eigen::Matrix4d;
using RVec4 = Eigen::Vector4d;

// Structural checks (Hermiticity, trace, unitarity) use kStructTol;
// eigenvalue positivity absorbs accumulated rounding with kPsdTol.
inline constexpr double kStructTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kZeroBranchTol = 1e-14;

enum class Errc {
    non_hermitian_input,
    not_unitary,
    not_normalized,
    dimension_mismatch,
    invalid_angles,
    not_a_state,
    not_applicable,
    out_of_range,
    invalid_shots,
    incomplete_settings,
    config_invalid,
    state_invalid,
    protocol_failed,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

template <typename DerivedA, typename DerivedB>
double max_abs_diff(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

template <typename DerivedA, typename DerivedB>
bool approx_equal(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                  double tol = kStructTol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return max_abs_diff(a, b) <= tol;
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    return m.allFinite();
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tol = kStructTol) {
    using Plain = typename Derived::PlainObject;
    Plain gram = u.adjoint() * u;
    return approx_equal(gram, Plain::Identity(u.rows(), u.cols()), tol);
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kStructTol) {
    return approx_equal(m, m.adjoint().eval(), tol);
}

// Frobenius distance minimized over a global phase: min_phi ||a - e^{i phi} b||_F.
// The minimizing phase is the argument of tr(b' a); subtracting the aligned
// matrix explicitly avoids the half-precision loss of the squared-norm form.
template <typename DerivedA, typename DerivedB>
double phase_invariant_distance(const Eigen::MatrixBase<DerivedA>& a,
                                const Eigen::MatrixBase<DerivedB>& b) {
    std::complex<double> overlap = (b.adjoint() * a).trace();
    std::complex<double> phase =
        std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : std::complex<double>(1.0, 0.0);
    return (a - phase * b).norm();
}

}  // namespace entconc
