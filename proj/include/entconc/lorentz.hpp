#pragma once

#include "entconc/qstate.hpp"

namespace entconc {

// Minkowski metric diag(1, -1, -1, -1) on correlation-matrix index space.
const RMat4& minkowski_metric();

// L eta L^T = eta, det L = +1, L_00 >= 1 within tol.
bool is_proper_orthochronous_lorentz(const RMat4& L, double tol = 1e-10);

// Decomposition L_A R L_B^T = diag(sigma) with both factors proper
// orthochronous. Spatial singular values are sorted descending by absolute
// value with s1, s2 >= 0 and any necessary sign carried by s3; s0 > 0 is
// fixed by orthochronicity. `diagonalizable` is decided by the residual
// off-diagonal mass of the assembled product (threshold 1e-8), so inputs
// whose R admits only a Jordan-type normal form come back flagged false.
struct LorentzNormalForm {
    RMat4 L_A = RMat4::Identity();
    RMat4 L_B = RMat4::Identity();
    RVec4 sigma = RVec4::Zero();
    bool diagonalizable = false;
    double offdiag_mass = 0.0;
};

LorentzNormalForm lorentz_normal_form(const RMatrix& R);

// Lorentz image of a 2x2 filter under the double cover:
// L_ij = tr(sigma_i a sigma_j a^dagger) / 2.
RMat4 lorentz_from_filter(const Mat2& a);

// Inverse of the double cover: the filter with |det| = 1 whose Lorentz image
// is L, determined up to a sign that is fixed by making the largest entry
// real positive.
Mat2 sl2_from_lorentz(const RMat4& L);

// Null directions of the defective similarity operators for a state whose R
// is not Lorentz-diagonalizable; each is returned as the spatial unit vector
// v with defect ray e0 + v. Used to aim the quasi-distillation boosts.
struct DefectDirections {
    bool found = false;
    Eigen::Vector3d v_a = Eigen::Vector3d::Zero();
    Eigen::Vector3d v_b = Eigen::Vector3d::Zero();
};

DefectDirections defect_directions(const RMatrix& R);

}  // namespace entconc
