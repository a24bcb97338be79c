#include "entconc/lorentz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace entconc {

namespace {

constexpr double kClusterTol = 1e-6;
constexpr double kNullTol = 1e-6;
constexpr double kCondLimit = 1e8;
constexpr double kOffdiagTol = 1e-8;

double minkowski_dot(const RVec4& x, const RVec4& y) {
    return x(0) * y(0) - x.tail<3>().dot(y.tail<3>());
}

// Columns of W, eta-orthonormalized so that W^T eta W = eta with the
// timelike column in slot 0. Fails (nullopt) on Jordan-type structure.
std::optional<RMat4> eta_orthonormal_eigenframe(const RMat4& N) {
    Eigen::EigenSolver<RMat4> es(N);
    if (es.info() != Eigen::Success) return std::nullopt;

    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (int i = 0; i < 4; ++i)
        if (std::abs(es.eigenvalues()(i).imag()) > kClusterTol * scale) return std::nullopt;

    // Jordan blocks show up as a near-singular eigenvector matrix.
    Eigen::JacobiSVD<Mat4> svd(es.eigenvectors());
    if (svd.singularValues()(0) > kCondLimit * svd.singularValues()(3)) return std::nullopt;

    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return es.eigenvalues()(a).real() > es.eigenvalues()(b).real();
    });

    // Realify: for real eigenvalues the eigenvectors are real up to a phase.
    RMat4 vectors;
    RVec4 values;
    for (int slot = 0; slot < 4; ++slot) {
        Vec4 v = es.eigenvectors().col(order[slot]);
        int k = 0;
        v.cwiseAbs().maxCoeff(&k);
        v *= std::polar(1.0, -std::arg(v(k)));
        if (v.imag().cwiseAbs().maxCoeff() > kClusterTol) return std::nullopt;
        vectors.col(slot) = v.real();
        values(slot) = es.eigenvalues()(order[slot]).real();
    }

    // Within each eigenvalue cluster, split by the Minkowski Gram matrix;
    // a near-null Gram eigenvalue means a defective (null) direction.
    RMat4 frame = RMat4::Zero();
    int filled = 0;
    std::vector<double> signatures;
    int begin = 0;
    while (begin < 4) {
        int end = begin + 1;
        while (end < 4 && std::abs(values(end) - values(begin)) <= kClusterTol * scale) ++end;
        const int m = end - begin;
        Eigen::MatrixXd v = vectors.block(0, begin, 4, m);
        Eigen::MatrixXd gram = v.transpose() * minkowski_metric() * v;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ges(gram);
        for (int j = 0; j < m; ++j) {
            const double g = ges.eigenvalues()(j);
            if (std::abs(g) < kNullTol) return std::nullopt;
            RVec4 col = v * ges.eigenvectors().col(j) / std::sqrt(std::abs(g));
            frame.col(filled++) = col;
            signatures.push_back(g > 0 ? 1.0 : -1.0);
        }
        begin = end;
    }

    int timelike = -1;
    for (int i = 0; i < 4; ++i) {
        if (signatures[static_cast<std::size_t>(i)] > 0) {
            if (timelike >= 0) return std::nullopt;
            timelike = i;
        }
    }
    if (timelike < 0) return std::nullopt;

    RMat4 ordered;
    ordered.col(0) = frame.col(timelike);
    int spatial = 1;
    for (int i = 0; i < 4; ++i)
        if (i != timelike) ordered.col(spatial++) = frame.col(i);
    if (ordered(0, 0) < 0) ordered.col(0) *= -1;
    return ordered;
}

// eta-Gram-Schmidt completion: spacelike unit vector eta-orthogonal to the
// given columns.
std::optional<RVec4> spacelike_completion(const std::vector<RVec4>& existing) {
    const RMat4 candidates = RMat4::Identity();
    for (int attempt = 0; attempt < 4; ++attempt) {
        // Try e1, e2, e3 first; e0 cannot yield a spacelike completion but
        // keeps the loop total.
        RVec4 v = candidates.col((attempt + 1) % 4);
        for (const RVec4& u : existing) {
            const double uu = minkowski_dot(u, u);
            if (std::abs(uu) < 1e-12) return std::nullopt;
            v -= (minkowski_dot(u, v) / uu) * u;
        }
        const double vv = minkowski_dot(v, v);
        if (vv < -1e-8) return RVec4(v / std::sqrt(-vv));
    }
    return std::nullopt;
}

}  // namespace

const RMat4& minkowski_metric() {
    static const RMat4 eta = [] {
        RMat4 m = RMat4::Identity();
        m(1, 1) = m(2, 2) = m(3, 3) = -1.0;
        return m;
    }();
    return eta;
}

bool is_proper_orthochronous_lorentz(const RMat4& L, double tol) {
    RMat4 gram = L * minkowski_metric() * L.transpose();
    if (max_abs_diff(gram, minkowski_metric()) > tol) return false;
    if (std::abs(L.determinant() - 1.0) > 10 * tol) return false;
    return L(0, 0) >= 1.0 - tol;
}

LorentzNormalForm lorentz_normal_form(const RMatrix& R) {
    // Precondition: R must come from a valid state.
    DensityMatrix4 rho = rmatrix_to_density(R);
    if (std::abs(R.r(0, 0) - 1.0) > 1e-9 || rho.min_eigenvalue() < -kPsdTol)
        throw Error(Errc::not_a_state, "R matrix fails the positivity round trip");

    LorentzNormalForm out;
    const RMat4& eta = minkowski_metric();

    auto frame = eta_orthonormal_eigenframe(eta * R.r.transpose() * eta * R.r);
    if (!frame) {
        out.offdiag_mass = std::numeric_limits<double>::infinity();
        return out;
    }
    RMat4 w = *frame;  // Lorentz by construction: W^T eta W = eta
    if (w.determinant() < 0) w.col(3) *= -1;

    // C = R W = L1 diag(s); recover columns of L1 slot by slot.
    RMat4 c = R.r * w;
    RMat4 l1 = RMat4::Zero();
    RVec4 s = RVec4::Zero();
    std::vector<int> missing;
    for (int i = 0; i < 4; ++i) {
        const double q = minkowski_dot(c.col(i), c.col(i));
        const double mag = std::sqrt(std::abs(q));
        if (mag < 1e-12) {
            missing.push_back(i);
            continue;
        }
        if (i == 0) {
            if (q <= 0) {
                out.offdiag_mass = std::numeric_limits<double>::infinity();
                return out;  // timelike image required for slot 0
            }
            s(0) = c.col(0)(0) >= 0 ? mag : -mag;
            l1.col(0) = c.col(0) / s(0);
        } else {
            if (q >= 0) {
                out.offdiag_mass = std::numeric_limits<double>::infinity();
                return out;
            }
            s(i) = mag;
            l1.col(i) = c.col(i) / mag;
        }
    }
    if (std::find(missing.begin(), missing.end(), 0) != missing.end()) {
        out.offdiag_mass = std::numeric_limits<double>::infinity();
        return out;  // R annihilates the timelike slot; not diagonalizable
    }
    for (int i : missing) {
        std::vector<RVec4> existing;
        for (int j = 0; j < 4; ++j)
            if (l1.col(j).cwiseAbs().maxCoeff() > 0) existing.push_back(l1.col(j));
        auto fill = spacelike_completion(existing);
        if (!fill) {
            out.offdiag_mass = std::numeric_limits<double>::infinity();
            return out;
        }
        l1.col(i) = *fill;
        s(i) = 0.0;
    }

    // Canonical ordering: spatial slots descending by |s|; odd permutations
    // compensated by flipping slot 3 of both factors.
    std::array<int, 3> perm{1, 2, 3};
    std::sort(perm.begin(), perm.end(),
              [&](int a, int b) { return std::abs(s(a)) > std::abs(s(b)); });
    {
        RMat4 w2 = w, l2 = l1;
        RVec4 s2 = s;
        for (int k = 0; k < 3; ++k) {
            w2.col(k + 1) = w.col(perm[static_cast<std::size_t>(k)]);
            l2.col(k + 1) = l1.col(perm[static_cast<std::size_t>(k)]);
            s2(k + 1) = s(perm[static_cast<std::size_t>(k)]);
        }
        const bool odd = (perm[0] == 1 && perm[1] == 3) || (perm[0] == 2 && perm[1] == 1) ||
                         (perm[0] == 3 && perm[1] == 2);
        if (odd) {
            w2.col(3) *= -1;
            l2.col(3) *= -1;
        }
        w = w2;
        l1 = l2;
        s = s2;
    }
    if (l1.determinant() < 0) {
        l1.col(3) *= -1;
        s(3) = -s(3);
    }
    if (w.determinant() < 0) {
        w.col(3) *= -1;
        s(3) = -s(3);
    }

    out.L_A = eta * l1.transpose() * eta;
    out.L_B = w.transpose();

    RMat4 t = out.L_A * R.r * out.L_B.transpose();
    out.sigma = t.diagonal();
    RMat4 offdiag = t;
    offdiag.diagonal().setZero();
    out.offdiag_mass = offdiag.norm();
    out.diagonalizable = out.offdiag_mass < kOffdiagTol &&
                         is_proper_orthochronous_lorentz(out.L_A) &&
                         is_proper_orthochronous_lorentz(out.L_B);
    if (!out.diagonalizable) {
        out.L_A = RMat4::Identity();
        out.L_B = RMat4::Identity();
    }
    return out;
}

RMat4 lorentz_from_filter(const Mat2& a) {
    RMat4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out(i, j) = 0.5 * (pauli(i) * a * pauli(j) * a.adjoint()).trace().real();
    return out;
}

Mat2 sl2_from_lorentz(const RMat4& L) {
    if (!is_proper_orthochronous_lorentz(L, 1e-8))
        throw Error(Errc::not_applicable, "matrix is not proper orthochronous Lorentz");

    // Change of basis from Pauli coordinates to vec coordinates: the induced
    // operator on vec(X) is conj(a) (x) a, whose reshuffle is the rank-1
    // matrix vec(a) vec(a)^dagger.
    Mat4 s_basis;
    for (int j = 0; j < 4; ++j) {
        const Mat2& sj = pauli(j);
        s_basis.col(j) << sj(0, 0), sj(1, 0), sj(0, 1), sj(1, 1);
    }
    Mat4 op = s_basis * L.cast<cx>() * (0.5 * s_basis.adjoint());

    Mat4 reshuffled;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    reshuffled(j + 2 * l, i + 2 * k) = op(2 * i + j, 2 * k + l);

    Eigen::SelfAdjointEigenSolver<Mat4> es(reshuffled);
    Vec4 lead = es.eigenvectors().col(3) * std::sqrt(std::max(es.eigenvalues()(3), 0.0));
    Mat2 a;
    a << lead(0), lead(2), lead(1), lead(3);

    const double det_mag = std::abs(a.determinant());
    if (det_mag < 1e-14)
        throw Error(Errc::not_applicable, "Lorentz matrix has no invertible SL(2,C) preimage");
    a /= std::sqrt(det_mag);

    int r = 0, ccol = 0;
    a.cwiseAbs().maxCoeff(&r, &ccol);
    a *= std::polar(1.0, -std::arg(a(r, ccol)));
    return a;
}

DefectDirections defect_directions(const RMatrix& R) {
    DefectDirections out;
    const RMat4& eta = minkowski_metric();

    auto null_direction = [&](const RMat4& n) -> std::optional<Eigen::Vector3d> {
        Eigen::EigenSolver<RMat4> es(n);
        if (es.info() != Eigen::Success) return std::nullopt;
        // Pick the eigenvector closest to the light cone.
        int best = -1;
        double best_null = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 4; ++i) {
            Vec4 v = es.eigenvectors().col(i);
            int k = 0;
            v.cwiseAbs().maxCoeff(&k);
            v *= std::polar(1.0, -std::arg(v(k)));
            RVec4 vr = v.real();
            if (vr.norm() < 1e-12) continue;
            vr.normalize();
            const double nullness = std::abs(minkowski_dot(vr, vr));
            if (nullness < best_null) {
                best_null = nullness;
                best = i;
            }
        }
        if (best < 0 || best_null > 0.5) return std::nullopt;

        // Refine with the least-squares eigenvector of the defective value.
        const double lambda = es.eigenvalues()(best).real();
        Eigen::JacobiSVD<RMat4> svd(n - lambda * RMat4::Identity(),
                                    Eigen::ComputeFullU | Eigen::ComputeFullV);
        RVec4 refined = svd.matrixV().col(3);
        if (std::abs(refined(0)) < 1e-9) return std::nullopt;
        Eigen::Vector3d spatial = refined.tail<3>() / refined(0);
        if (spatial.norm() < 1e-12) return std::nullopt;
        return spatial.normalized();
    };

    auto va = null_direction(eta * R.r * eta * R.r.transpose());
    auto vb = null_direction(eta * R.r.transpose() * eta * R.r);
    if (va && vb) {
        out.found = true;
        out.v_a = *va;
        out.v_b = *vb;
    }
    return out;
}

}  // namespace entconc
