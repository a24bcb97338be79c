#include "entconc/qstate.hpp"
#include "entconc/random.hpp"

#include <doctest.h>

using namespace entconc;

TEST_CASE("pauli matrices and basis kets") {
    CHECK(approx_equal(pauli(0), Mat2::Identity()));
    CHECK(approx_equal(pauli(1) * pauli(1), Mat2::Identity()));
    CHECK(approx_equal(pauli(2) * pauli(2), Mat2::Identity()));
    CHECK(approx_equal(pauli(3) * pauli(3), Mat2::Identity()));
    // sigma_x sigma_y = i sigma_z
    CHECK(approx_equal(pauli(1) * pauli(2), Mat2(cx(0, 1) * pauli(3))));
    CHECK(ket_h()(0) == cx(1, 0));
    CHECK(ket_v()(1) == cx(1, 0));
}

TEST_CASE("maximally mixed state has no correlations") {
    DensityMatrix4 rho{0.25 * Mat4::Identity()};
    RMatrix r = density_to_rmatrix(rho);
    RMat4 expected = RMat4::Zero();
    expected(0, 0) = 1.0;
    CHECK(max_abs_diff(r.r, expected) <= kStructTol);
    CHECK(approx_equal(rmatrix_to_density(r).matrix, rho.matrix));
}

TEST_CASE("phi+ correlation matrix is diag(1, 1, -1, 1)") {
    RMatrix r = density_to_rmatrix(PureState2Q::bell_phi_plus().to_density());
    RMat4 expected = RMat4::Zero();
    expected.diagonal() << 1, 1, -1, 1;
    CHECK(max_abs_diff(r.r, expected) <= kStructTol);

    RMatrix diag;
    diag.r = expected;
    CHECK(approx_equal(rmatrix_to_density(diag).matrix,
                       PureState2Q::bell_phi_plus().to_density().matrix));
}

TEST_CASE("hermiticity violations are rejected") {
    Mat4 m = 0.25 * Mat4::Identity();
    m(0, 1) += cx(0, 1e-6);
    CHECK_THROWS_AS(density_to_rmatrix(DensityMatrix4{m}), Error);
    try {
        density_to_rmatrix(DensityMatrix4{m});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::non_hermitian_input);
    }
}

TEST_CASE("density <-> R round trip on random states") {
    auto rng = make_rng(101);
    for (int i = 0; i < 1000; ++i) {
        DensityMatrix4 rho = random_density4(rng);
        DensityMatrix4 back = rmatrix_to_density(density_to_rmatrix(rho));
        CHECK(max_abs_diff(back.matrix, rho.matrix) <= kStructTol);
    }
}

TEST_CASE("density_to_rmatrix is linear") {
    auto rng = make_rng(102);
    for (int i = 0; i < 50; ++i) {
        DensityMatrix4 r1 = random_density4(rng);
        DensityMatrix4 r2 = random_density4(rng);
        const double a = 0.7, b = 0.3;
        Mat4 mix = a * r1.matrix + b * r2.matrix;
        RMat4 lhs = density_to_rmatrix(DensityMatrix4{mix}).r;
        RMat4 rhs = a * density_to_rmatrix(r1).r + b * density_to_rmatrix(r2).r;
        CHECK(max_abs_diff(lhs, rhs) <= kStructTol);
    }
}

TEST_CASE("product states factorize into rank-1 R matrices") {
    auto rng = make_rng(103);
    for (int i = 0; i < 50; ++i) {
        Mat2 a = random_filter2(rng);
        Mat2 b = random_filter2(rng);
        Mat2 rho_a = a * a.adjoint();
        rho_a /= rho_a.trace().real();
        Mat2 rho_b = b * b.adjoint();
        rho_b /= rho_b.trace().real();

        RMat4 r = density_to_rmatrix(DensityMatrix4{kron(rho_a, rho_b)}).r;
        // R_ij = r_i s_j, so every 2x2 minor vanishes.
        double worst = 0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q)
                for (int s = 0; s < 4; ++s)
                    for (int t = s + 1; t < 4; ++t)
                        worst = std::max(worst,
                                         std::abs(r(p, s) * r(q, t) - r(p, t) * r(q, s)));
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("partial trace") {
    SUBCASE("product state keeps its factor") {
        Mat2 h = ket_h() * ket_h().adjoint();
        Mat2 v = ket_v() * ket_v().adjoint();
        DensityMatrix4 rho{kron(h, v)};
        CHECK(approx_equal(partial_trace(rho, Arm::A), h));
        CHECK(approx_equal(partial_trace(rho, Arm::B), v));
    }
    SUBCASE("phi+ marginal is maximally mixed") {
        DensityMatrix4 rho = PureState2Q::bell_phi_plus().to_density();
        CHECK(approx_equal(partial_trace(rho, Arm::A), Mat2(0.5 * Mat2::Identity())));
        CHECK(approx_equal(partial_trace(rho, Arm::B), Mat2(0.5 * Mat2::Identity())));
    }
    SUBCASE("trace is preserved on random states") {
        auto rng = make_rng(104);
        for (int i = 0; i < 200; ++i) {
            DensityMatrix4 rho = random_density4(rng);
            CHECK(std::abs(partial_trace(rho, Arm::A).trace().real() - 1.0) <= kStructTol);
            CHECK(std::abs(partial_trace(rho, Arm::B).trace().real() - 1.0) <= kStructTol);
        }
    }
}

TEST_CASE("normalization flags and errors") {
    PureState2Q psi = PureState2Q::schmidt(0.3);
    CHECK(psi.is_normalized());
    PureState2Q bad{2.0 * psi.amplitudes};
    CHECK_THROWS_AS(bad.require_normalized(), Error);

    DensityMatrix4 rho = psi.to_density();
    CHECK(rho.is_state());
}

TEST_CASE("project_to_physical clips negative eigenvalues") {
    Mat4 m = PureState2Q::bell_phi_plus().to_density().matrix;
    m(1, 1) = -0.05;
    m(2, 2) = 0.05;
    DensityMatrix4 repaired = project_to_physical(m);
    CHECK(repaired.is_state());
    CHECK(std::abs(repaired.trace_real() - 1.0) <= kStructTol);
}
