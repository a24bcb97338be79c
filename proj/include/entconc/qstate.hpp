#pragma once

#include "entconc/common.hpp"

namespace entconc {

// Basis conventions, fixed once for the whole library:
//   |H> = |0>_P = (1, 0)^T, |V> = |1>_P = (0, 1)^T.
//   Two-photon basis order (|HH>, |HV>, |VH>, |VV>), arm A is the left
//   tensor factor; amplitude index = 2*a + b.
enum class Arm { A, B };

// sigma_0 = I, sigma_1 = X, sigma_2 = Y, sigma_3 = Z.
const Mat2& pauli(int i);

Mat4 kron(const Mat2& a, const Mat2& b);
Vec4 kron(const Vec2& a, const Vec2& b);

Vec2 ket_h();
Vec2 ket_v();

struct PureState2Q {
    Vec4 amplitudes = Vec4::Zero();

    static PureState2Q from_amplitudes(const Vec4& amp);
    // cos(alpha)|HH> + sin(alpha)|VV>
    static PureState2Q schmidt(double alpha);
    static PureState2Q bell_phi_plus();

    double norm() const { return amplitudes.norm(); }
    bool is_normalized(double tol = kStructTol) const { return std::abs(norm() - 1.0) <= tol; }
    void require_normalized() const;

    struct DensityMatrix4 to_density() const;
};

struct DensityMatrix4 {
    Mat4 matrix = Mat4::Zero();

    static DensityMatrix4 from_matrix(const Mat4& m);

    double trace_real() const { return matrix.trace().real(); }
    bool is_hermitian(double tol = kStructTol) const { return entconc::is_hermitian(matrix, tol); }
    bool is_unit_trace(double tol = kStructTol) const { return std::abs(matrix.trace() - cx(1.0, 0.0)) <= tol; }
    double min_eigenvalue() const;
    bool is_state(double psd_tol = kPsdTol, double struct_tol = kStructTol) const;
    void require_state() const;
};

// Pauli correlation representation R_ij = tr(rho sigma_i x sigma_j).
struct RMatrix {
    RMat4 r = RMat4::Zero();
};

RMatrix density_to_rmatrix(const DensityMatrix4& rho);
DensityMatrix4 rmatrix_to_density(const RMatrix& R);

Mat2 partial_trace(const DensityMatrix4& rho, Arm keep);

// <target| rho |target> for a pure target.
double fidelity_to_pure(const DensityMatrix4& rho, const PureState2Q& target);
double trace_distance(const DensityMatrix4& a, const DensityMatrix4& b);

// Eigenvalue clipping at zero followed by trace renormalization.
DensityMatrix4 project_to_physical(const Mat4& hermitian);

}  // namespace entconc
