#include "entconc/optical.hpp"
#include "entconc/random.hpp"

#include <doctest.h>

using namespace entconc;

namespace {
std::uniform_real_distribution<double> full_angle(-M_PI, M_PI);
}

TEST_CASE("half-wave plate at fixed angles") {
    Mat2 expected;
    expected << 1, 0, 0, -1;
    CHECK(approx_equal(hwp_matrix(0.0), expected));

    expected << 0, 1, 1, 0;
    CHECK(approx_equal(hwp_matrix(M_PI / 4), expected));

    // cos(pi/4) = sin(pi/4) = 1/sqrt(2): the Hadamard-like plate
    const double h = 1 / std::sqrt(2.0);
    expected << h, h, h, -h;
    CHECK(approx_equal(hwp_matrix(M_PI / 8), expected));
}

TEST_CASE("half-wave plate is an involution for all angles") {
    auto rng = make_rng(201);
    for (int i = 0; i < 100; ++i) {
        const double phi = full_angle(rng);
        CHECK(approx_equal(hwp_matrix(phi) * hwp_matrix(phi), Mat2::Identity()));
    }
}

TEST_CASE("quarter-wave plate convention and unitarity") {
    Mat2 expected;
    expected << 1, 0, 0, cx(0, 1);
    CHECK(approx_equal(qwp_matrix(0.0), expected));

    auto rng = make_rng(202);
    for (int i = 0; i < 100; ++i) {
        const double phi = full_angle(rng);
        CHECK(is_unitary(qwp_matrix(phi)));
        // two quarter waves make a half wave
        CHECK(phase_invariant_distance(qwp_matrix(phi) * qwp_matrix(phi), hwp_matrix(phi)) <=
              1e-12);
    }
}

TEST_CASE("spr matrix form") {
    CHECK(approx_equal(spr_matrix({0, 0, 0}), hwp_matrix(0.0)));
    Mat2 not_gate;
    not_gate << 0, 1, 1, 0;
    CHECK(approx_equal(spr_matrix({0, 0, M_PI / 2}), not_gate));

    auto rng = make_rng(203);
    for (int i = 0; i < 200; ++i) {
        SprParams p{full_angle(rng), full_angle(rng), full_angle(rng)};
        Mat2 u = spr_matrix(p);
        CHECK(is_unitary(u));
        // determinant is identically -1
        cx det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
        CHECK(std::abs(det - cx(-1, 0)) <= kStructTol);
    }
}

TEST_CASE("ry convention") {
    CHECK(approx_equal(ry(0.0), Mat2::Identity()));

    // R_y(-2w) maps (cos w, sin w) to (1, 0); pins the sign convention.
    const double omega = 0.7;
    Vec2 v(std::cos(omega), std::sin(omega));
    Vec2 mapped = ry(-2 * omega) * v;
    CHECK(std::abs(mapped(0) - cx(1, 0)) <= kStructTol);
    CHECK(std::abs(mapped(1)) <= kStructTol);

    auto rng = make_rng(204);
    for (int i = 0; i < 100; ++i) {
        const double a = full_angle(rng), b = full_angle(rng);
        CHECK(approx_equal(ry(a) * ry(b), ry(a + b)));
    }
}

TEST_CASE("synthesize_spr on the worked rotation") {
    const double omega = std::acos(1 / std::sqrt(3.0));
    SprSynthesis s = synthesize_spr(ry(-2 * omega));
    // HWP plate angle is half the rotation parameter.
    CHECK(s.params.theta == doctest::Approx(omega).epsilon(1e-12));
    bool found_hwp = false;
    for (const auto& e : s.sequence.elements)
        if (e.kind == OpticalElement::Kind::hwp) {
            found_hwp = true;
            CHECK(e.angle == doctest::Approx(omega / 2).epsilon(1e-12));
        }
    CHECK(found_hwp);
    CHECK(s.sequence.residual() <= 1e-12);
}

TEST_CASE("synthesize_spr identity and errors") {
    SprSynthesis s = synthesize_spr(Mat2::Identity());
    CHECK(s.sequence.residual() <= 1e-12);
    CHECK(phase_invariant_distance(s.sequence.product(), Mat2::Identity()) <= 1e-12);

    Mat2 not_unitary;
    not_unitary << 1, 0, 0, 2;
    CHECK_THROWS_AS(synthesize_spr(not_unitary), Error);
}

TEST_CASE("synthesize_spr reconstructs 1000 random unitaries") {
    auto rng = make_rng(205);
    for (int i = 0; i < 1000; ++i) {
        Mat2 target = random_unitary2(rng);
        SprSynthesis s = synthesize_spr(target);
        CHECK(s.sequence.residual() <= 1e-10);
        // the (phase shifter, HWP, phase shifter) shape
        REQUIRE(s.sequence.elements.size() == 3);
        CHECK(s.sequence.elements[0].kind == OpticalElement::Kind::phase_shifter);
        CHECK(s.sequence.elements[1].kind == OpticalElement::Kind::hwp);
        CHECK(s.sequence.elements[2].kind == OpticalElement::Kind::phase_shifter);
        // recovered parameters rebuild the target up to global phase
        CHECK(phase_invariant_distance(spr_matrix(s.params), target) <= 1e-10);
    }
}

TEST_CASE("every element matrix is unitary") {
    auto rng = make_rng(206);
    for (int i = 0; i < 50; ++i) {
        const double angle = full_angle(rng);
        for (const auto& element :
             {OpticalElement::hwp(angle, i % 2), OpticalElement::qwp(angle, i % 2),
              OpticalElement::phase_shifter(angle, OpticalElement::Component::v, i % 2),
              OpticalElement::pbs(), OpticalElement::location_not(), OpticalElement::identity()}) {
            CHECK(is_unitary(element.polloc_matrix()));
        }
    }
}
