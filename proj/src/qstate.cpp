#include "entconc/qstate.hpp"

#include <array>

namespace entconc {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::non_hermitian_input: return "NonHermitianInput";
        case Errc::not_unitary: return "NotUnitary";
        case Errc::not_normalized: return "NotNormalized";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::invalid_angles: return "InvalidAngles";
        case Errc::not_a_state: return "NotAState";
        case Errc::not_applicable: return "NotApplicable";
        case Errc::out_of_range: return "OutOfRange";
        case Errc::invalid_shots: return "InvalidShots";
        case Errc::incomplete_settings: return "IncompleteSettings";
        case Errc::config_invalid: return "ConfigInvalid";
        case Errc::state_invalid: return "StateInvalid";
        case Errc::protocol_failed: return "ProtocolFailed";
    }
    return "UnknownError";
}

const Mat2& pauli(int i) {
    static const std::array<Mat2, 4> sigmas = [] {
        std::array<Mat2, 4> s;
        s[0] << 1, 0, 0, 1;
        s[1] << 0, 1, 1, 0;
        s[2] << 0, cx(0, -1), cx(0, 1), 0;
        s[3] << 1, 0, 0, -1;
        return s;
    }();
    return sigmas.at(static_cast<std::size_t>(i));
}

Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

Vec4 kron(const Vec2& a, const Vec2& b) {
    Vec4 out;
    out << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
    return out;
}

Vec2 ket_h() { return Vec2(1, 0); }
Vec2 ket_v() { return Vec2(0, 1); }

PureState2Q PureState2Q::from_amplitudes(const Vec4& amp) {
    if (!all_finite(amp)) throw Error(Errc::state_invalid, "non-finite amplitude");
    return PureState2Q{amp};
}

PureState2Q PureState2Q::schmidt(double alpha) {
    Vec4 amp = Vec4::Zero();
    amp(0) = std::cos(alpha);
    amp(3) = std::sin(alpha);
    return PureState2Q{amp};
}

PureState2Q PureState2Q::bell_phi_plus() { return schmidt(M_PI / 4.0); }

void PureState2Q::require_normalized() const {
    if (!is_normalized())
        throw Error(Errc::not_normalized, "state norm deviates from 1 by more than 1e-12");
}

DensityMatrix4 PureState2Q::to_density() const {
    return DensityMatrix4{amplitudes * amplitudes.adjoint()};
}

DensityMatrix4 DensityMatrix4::from_matrix(const Mat4& m) {
    if (!all_finite(m)) throw Error(Errc::state_invalid, "non-finite entry");
    return DensityMatrix4{m};
}

double DensityMatrix4::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat4> es(matrix);
    return es.eigenvalues().minCoeff();
}

bool DensityMatrix4::is_state(double psd_tol, double struct_tol) const {
    return is_hermitian(struct_tol) && is_unit_trace(struct_tol) && min_eigenvalue() >= -psd_tol;
}

void DensityMatrix4::require_state() const {
    if (!is_hermitian()) throw Error(Errc::non_hermitian_input, "density matrix not Hermitian");
    if (!is_unit_trace()) throw Error(Errc::not_a_state, "density matrix trace differs from 1");
    if (min_eigenvalue() < -kPsdTol) throw Error(Errc::not_a_state, "density matrix not positive semidefinite");
}

RMatrix density_to_rmatrix(const DensityMatrix4& rho) {
    if (!rho.is_hermitian())
        throw Error(Errc::non_hermitian_input, "density matrix not Hermitian within 1e-12");
    RMatrix out;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            cx value = (rho.matrix * kron(pauli(i), pauli(j))).trace();
            // Hermitian rho against Hermitian observables gives real traces.
            if (std::abs(value.imag()) > kStructTol)
                throw Error(Errc::non_hermitian_input, "correlation has imaginary residue above 1e-12");
            out.r(i, j) = value.real();
        }
    }
    return out;
}

DensityMatrix4 rmatrix_to_density(const RMatrix& R) {
    Mat4 m = Mat4::Zero();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m += R.r(i, j) * kron(pauli(i), pauli(j));
    m *= 0.25;
    // Hermitian by construction for real R; symmetrize away rounding residue.
    m = 0.5 * (m + m.adjoint().eval());
    return DensityMatrix4{m};
}

Mat2 partial_trace(const DensityMatrix4& rho, Arm keep) {
    Mat2 out = Mat2::Zero();
    if (keep == Arm::A) {
        for (int a = 0; a < 2; ++a)
            for (int ap = 0; ap < 2; ++ap)
                for (int b = 0; b < 2; ++b)
                    out(a, ap) += rho.matrix(2 * a + b, 2 * ap + b);
    } else {
        for (int b = 0; b < 2; ++b)
            for (int bp = 0; bp < 2; ++bp)
                for (int a = 0; a < 2; ++a)
                    out(b, bp) += rho.matrix(2 * a + b, 2 * a + bp);
    }
    return out;
}

double fidelity_to_pure(const DensityMatrix4& rho, const PureState2Q& target) {
    cx value = target.amplitudes.adjoint() * rho.matrix * target.amplitudes;
    return value.real();
}

double trace_distance(const DensityMatrix4& a, const DensityMatrix4& b) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(a.matrix - b.matrix);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

DensityMatrix4 project_to_physical(const Mat4& hermitian) {
    Mat4 sym = 0.5 * (hermitian + hermitian.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Mat4> es(sym);
    Eigen::Vector4d vals = es.eigenvalues().cwiseMax(0.0);
    double total = vals.sum();
    if (total <= 0.0) throw Error(Errc::not_a_state, "matrix has no positive part");
    vals /= total;
    Mat4 out = es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
    return DensityMatrix4{0.5 * (out + out.adjoint().eval())};
}

}  // namespace entconc
