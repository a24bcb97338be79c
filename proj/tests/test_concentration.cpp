#include "entconc/concentration.hpp"
#include "entconc/random.hpp"
#include "entconc/tomography.hpp"

#include <doctest.h>

using namespace entconc;

namespace {

DensityMatrix4 jordan_type_state(double p) {
    Mat4 m = p * PureState2Q::bell_phi_plus().to_density().matrix;
    m(1, 1) += 1.0 - p;
    return DensityMatrix4{m};
}

}  // namespace

TEST_CASE("plan_pure: equal angles give the identity plan") {
    ConcentrationPlan plan = plan_pure({0.5, 0.5});
    CHECK(*plan.predicted_success_probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(approx_equal(plan.arm_a.filter, Mat2::Identity()));
    CHECK(approx_equal(plan.arm_b.filter, Mat2::Identity()));

    ConcentrationPlan degenerate = plan_pure({0.0, 0.0});
    CHECK(*degenerate.predicted_success_probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("plan_pure: the worked example settings") {
    const double alpha = M_PI / 6;  // cos = sqrt(3)/2
    ConcentrationPlan plan = plan_pure({alpha, M_PI / 4});
    const double omega = std::acos(1 / std::sqrt(3.0));

    CHECK(plan.arm_a.povm.theta == doctest::Approx(omega).epsilon(1e-12));
    CHECK(*plan.predicted_success_probability == doctest::Approx(0.5).epsilon(1e-12));

    Mat2 expected_filter = Mat2::Zero();
    expected_filter(0, 0) = 1 / std::sqrt(3.0);
    expected_filter(1, 1) = 1.0;
    CHECK(max_abs_diff(plan.arm_a.filter, expected_filter) <= kStructTol);

    // Slot A2 carries R_y(-2w); every other slot is the identity.
    auto settings = plan.spr_settings();
    CHECK(phase_invariant_distance(
              std::polar(1.0, settings.at("A2").global_phase) *
                  spr_matrix(settings.at("A2").params),
              ry(-2 * omega)) <= 1e-12);
    for (const char* slot : {"A1", "A3", "A4", "B1", "B2", "B3", "B4"})
        CHECK(phase_invariant_distance(spr_matrix(settings.at(slot).params),
                                       Mat2::Identity()) <= 1e-12);
}

TEST_CASE("plan_pure: product states cannot be concentrated") {
    ConcentrationPlan plan = plan_pure({0.0, M_PI / 4});
    CHECK(*plan.predicted_success_probability == doctest::Approx(0.0).epsilon(1e-14));
    ConcentrationOutcome out = execute_plan(plan, PureState2Q::schmidt(0.0));
    CHECK(out.success_probability <= 1e-12);
    CHECK(out.empty);
}

TEST_CASE("plan_pure rejects invalid angle ranges") {
    CHECK_THROWS_AS(plan_pure({0.5, 0.2}), Error);
    CHECK_THROWS_AS(plan_pure({-0.1, 0.2}), Error);
    CHECK_THROWS_AS(plan_pure({0.2, 1.0}), Error);
}

TEST_CASE("execute_plan: identity plan leaves states unchanged") {
    ConcentrationPlan plan;
    auto rng = make_rng(501);
    DensityMatrix4 rho = random_density4(rng);
    ConcentrationOutcome out = execute_plan(plan, rho);
    CHECK(out.success_probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_abs_diff(out.output_state.matrix, rho.matrix) <= 1e-12);
}

TEST_CASE("execute_plan: worked example against the direct Kraus oracle") {
    const double alpha = M_PI / 6;
    ConcentrationPlan plan = plan_pure({alpha, M_PI / 4});
    PureState2Q input = PureState2Q::schmidt(alpha);

    ConcentrationOutcome circuit = execute_plan(plan, input);
    CHECK(circuit.success_probability == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(fidelity_to_pure(circuit.output_state, PureState2Q::bell_phi_plus()) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(circuit.concurrence_after == doctest::Approx(1.0).epsilon(1e-10));

    ConcentrationOutcome kraus = execute_plan_kraus(plan, input);
    CHECK(std::abs(circuit.success_probability - kraus.success_probability) <= 1e-10);
    CHECK(max_abs_diff(circuit.output_state.matrix, kraus.output_state.matrix) <= 1e-10);
}

TEST_CASE("execute_plan matches Eq-style closed form on an angle grid") {
    for (double alpha : {0.1, 0.35, 0.6}) {
        for (double beta : {0.35, 0.6, M_PI / 4}) {
            if (alpha > beta) continue;
            ConcentrationPlan plan = plan_pure({alpha, beta});
            ConcentrationOutcome out = execute_plan(plan, PureState2Q::schmidt(alpha));
            const double expected = std::pow(std::sin(alpha) / std::sin(beta), 2);
            CHECK(std::abs(out.success_probability - expected) <= 1e-10);
            CHECK(fidelity_to_pure(out.output_state, PureState2Q::schmidt(beta)) >=
                  1.0 - 1e-10);
        }
    }
}

TEST_CASE("arm_plan_from_filter reconstructs its input") {
    auto rng = make_rng(502);
    for (int i = 0; i < 200; ++i) {
        Mat2 f = random_filter2(rng);
        ArmPlan arm = arm_plan_from_filter(f);
        CHECK(max_abs_diff(arm.povm.kraus1(), f) <= 1e-12);
        CHECK(std::cos(arm.theta()) <= 1.0 + kStructTol);
        CHECK(arm.povm.completeness_residual() <= 1e-12);
    }
    Mat2 too_big = 2.0 * Mat2::Identity();
    CHECK_THROWS_AS(arm_plan_from_filter(too_big), Error);
}

TEST_CASE("plan_mixed: bell-diagonal states get unitary filters") {
    RMatrix r;
    r.r = RMat4::Zero();
    r.r.diagonal() << 1.0, 0.5, 0.4, -0.1;
    DensityMatrix4 rho = rmatrix_to_density(r);
    ConcentrationPlan plan = plan_mixed(rho);
    CHECK(is_unitary(plan.arm_a.filter, 1e-8));
    CHECK(is_unitary(plan.arm_b.filter, 1e-8));
    ConcentrationOutcome out = execute_plan(plan, rho);
    CHECK(out.success_probability == doctest::Approx(1.0).epsilon(1e-8));
    RMat4 out_r = density_to_rmatrix(out.output_state).r;
    out_r.diagonal().setZero();
    CHECK(out_r.norm() <= 1e-8);
}

TEST_CASE("plan_mixed on a pure state matches the pure protocol") {
    const double alpha = M_PI / 6;
    DensityMatrix4 rho = PureState2Q::schmidt(alpha).to_density();
    ConcentrationPlan plan = plan_mixed(rho);
    ConcentrationOutcome out = execute_plan(plan, rho);

    // Same optimal probability and a maximally entangled output, up to the
    // local-unitary freedom of the normal form.
    CHECK(out.success_probability == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(out.concurrence_after == doctest::Approx(1.0).epsilon(1e-9));

    ConcentrationOutcome reference =
        execute_plan(plan_pure({alpha, M_PI / 4}), PureState2Q::schmidt(alpha));
    CHECK(std::abs(out.success_probability - reference.success_probability) <= 1e-9);
    CHECK(std::abs(out.concurrence_after - reference.concurrence_after) <= 1e-9);
}

TEST_CASE("plan_mixed drives random states to the Bell-diagonal normal form") {
    auto rng = make_rng(503);
    for (int i = 0; i < 60; ++i) {
        DensityMatrix4 rho = random_density4(rng);
        ConcentrationPlan plan = plan_mixed(rho);
        ConcentrationOutcome out = execute_plan(plan, rho);

        RMat4 out_r = density_to_rmatrix(out.output_state).r;
        out_r.diagonal().setZero();
        CHECK(out_r.norm() <= 1e-6);
        CHECK(out.eof_after >= out.eof_before - 1e-9);

        ConcentrationOutcome kraus = execute_plan_kraus(plan, rho);
        CHECK(std::abs(out.success_probability - kraus.success_probability) <= 1e-10);
        CHECK(max_abs_diff(out.output_state.matrix, kraus.output_state.matrix) <= 1e-10);
    }
}

TEST_CASE("quasi_distill rejects diagonalizable states") {
    auto rng = make_rng(504);
    CHECK_THROWS_AS(quasi_distill(random_density4(rng)), Error);
}

TEST_CASE("quasi_distill family endpoints and monotonicity") {
    DensityMatrix4 rho = jordan_type_state(0.5);
    auto family = quasi_distill(rho, 1e-3, 20);
    REQUIRE(family.size() == 20);

    // eps = 1 endpoint: no filtering
    ConcentrationOutcome first = execute_plan_kraus(family.front(), rho);
    CHECK(first.success_probability == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(max_abs_diff(first.output_state.matrix, rho.matrix) <= 1e-10);

    double prev_c = -1.0, prev_p = 2.0;
    for (const auto& plan : family) {
        ConcentrationOutcome out = execute_plan_kraus(plan, rho);
        CHECK(out.concurrence_after >= prev_c - 1e-10);
        CHECK(out.success_probability <= prev_p + 1e-10);
        prev_c = out.concurrence_after;
        prev_p = out.success_probability;
    }
    // entanglement strictly exceeds the input near the singular end
    CHECK(prev_c > concurrence(rho) + 0.1);

    // the fallback inside plan_mixed picks a member of this family
    ConcentrationPlan fallback = plan_mixed(rho);
    ConcentrationOutcome out = execute_plan(fallback, rho);
    CHECK(out.concurrence_after > concurrence(rho));
}

TEST_CASE("quasi_distill argument validation") {
    DensityMatrix4 rho = jordan_type_state(0.5);
    CHECK_THROWS_AS(quasi_distill(rho, 0.0, 20), Error);
    CHECK_THROWS_AS(quasi_distill(rho, 0.5, 1), Error);
}

TEST_CASE("vbs_to_plan basics") {
    ConcentrationPlan identity = vbs_to_plan({1, 1, 1, 1});
    CHECK(approx_equal(identity.joint_filter(), Mat4::Identity()));

    CHECK_THROWS_AS(vbs_to_plan({1.5, 1, 1, 1}), Error);
    CHECK_THROWS_AS(vbs_to_plan({-0.1, 1, 1, 1}), Error);
}

TEST_CASE("vbs_to_plan reproduces the worked pure example") {
    VbsParams v{1 / std::sqrt(3.0), 1.0, 1.0, 1.0};
    ConcentrationPlan vbs_plan = vbs_to_plan(v);
    PureState2Q input = PureState2Q::schmidt(M_PI / 6);

    ConcentrationOutcome vbs_out = execute_plan(vbs_plan, input);
    ConcentrationOutcome pure_out = execute_plan(plan_pure({M_PI / 6, M_PI / 4}), input);
    CHECK(std::abs(vbs_out.success_probability - pure_out.success_probability) <= 1e-10);
    CHECK(max_abs_diff(vbs_out.output_state.matrix, pure_out.output_state.matrix) <= 1e-10);
}

TEST_CASE("vbs conditional output equals the transmission-matrix action") {
    auto rng = make_rng(505);
    std::uniform_real_distribution<double> eta(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        VbsParams v{eta(rng), eta(rng), eta(rng), eta(rng)};
        PureState2Q psi = random_pure_state(rng);

        ConcentrationOutcome out = execute_plan(vbs_to_plan(v), psi);
        Vec4 direct = vbs_transmission_matrix(v) * psi.amplitudes;
        const double p = direct.squaredNorm();
        CHECK(std::abs(out.success_probability - p) <= 1e-12);
        if (p > 1e-12) {
            Mat4 expected = direct * direct.adjoint() / p;
            CHECK(max_abs_diff(out.output_state.matrix, expected) <= 1e-12);
        }
    }
}

TEST_CASE("plan invariants: filter factorization and physical singular values") {
    auto rng = make_rng(506);
    for (int i = 0; i < 50; ++i) {
        DensityMatrix4 rho = random_density4(rng);
        ConcentrationPlan plan = plan_mixed(rho);
        for (const ArmPlan* arm : {&plan.arm_a, &plan.arm_b}) {
            CHECK(max_abs_diff(arm->povm.kraus1(), arm->filter) <= 1e-12);
            Eigen::JacobiSVD<Mat2> svd(arm->filter);
            CHECK(svd.singularValues()(0) <= 1.0 + 1e-12);
            CHECK(svd.singularValues()(1) > 0.0);
            CHECK(arm->povm.completeness_residual() <= 1e-12);
        }
    }
}
