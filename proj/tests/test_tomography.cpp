#include "entconc/tomography.hpp"
#include "entconc/random.hpp"

#include <doctest.h>

#include <algorithm>

using namespace entconc;

namespace {

std::vector<MeasurementSetting> nine() {
    auto s = MeasurementSetting::all_nine();
    return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("analyzers project onto the declared bases") {
    for (PauliBasis basis : {PauliBasis::x, PauliBasis::y, PauliBasis::z}) {
        Mat2 w = MeasurementSetting::analyzer(basis);
        CHECK(is_unitary(w));
        CHECK(approx_equal(w * pauli(static_cast<int>(basis)) * w.adjoint(), pauli(3)));
        // PBS after W realizes the declared projectors
        for (int outcome = 0; outcome < 2; ++outcome) {
            Mat2 port = Mat2::Zero();
            port(outcome, outcome) = 1;
            CHECK(approx_equal(w.adjoint() * port * w,
                               MeasurementSetting::outcome_projector(basis, outcome)));
        }
    }
}

TEST_CASE("|HH> puts every count in the HH outcome") {
    Vec4 hh = Vec4::Zero();
    hh(0) = 1;
    auto records = simulate_counts(PureState2Q{hh}.to_density(),
                                   {MeasurementSetting{PauliBasis::z, PauliBasis::z}}, 1000,
                                   CountMode::exact);
    REQUIRE(records.size() == 1);
    CHECK(records[0].counts[0] == doctest::Approx(1000.0));
    CHECK(records[0].counts[1] + records[0].counts[2] + records[0].counts[3] <= 1e-9);
}

TEST_CASE("phi+ is perfectly correlated in the D/A basis") {
    auto p = born_probabilities(PureState2Q::bell_phi_plus().to_density(),
                                {PauliBasis::x, PauliBasis::x});
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p[3] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sampled counts are reproducible for a fixed seed") {
    auto rng = make_rng(601);
    DensityMatrix4 rho = random_density4(rng);
    auto a = simulate_counts(rho, nine(), 10000, CountMode::sampled, 42);
    auto b = simulate_counts(rho, nine(), 10000, CountMode::sampled, 42);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (int k = 0; k < 4; ++k) CHECK(a[i].counts[k] == b[i].counts[k]);

    auto c = simulate_counts(rho, nine(), 10000, CountMode::sampled, 43);
    bool any_different = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (int k = 0; k < 4; ++k) any_different |= a[i].counts[k] != c[i].counts[k];
    CHECK(any_different);
}

TEST_CASE("count bookkeeping: sums and validation") {
    auto rng = make_rng(602);
    DensityMatrix4 rho = random_density4(rng);
    auto records = simulate_counts(rho, nine(), 5000, CountMode::sampled, 7);
    for (const auto& rec : records) {
        CHECK(rec.counts[0] + rec.counts[1] + rec.counts[2] + rec.counts[3] ==
              doctest::Approx(rec.total));
        for (double c : rec.counts) CHECK(c >= 0);
    }
    CHECK_THROWS_AS(simulate_counts(rho, nine(), -1, CountMode::exact), Error);
    CHECK_THROWS_AS(simulate_counts(rho, nine(), 0, CountMode::sampled, 1), Error);
}

TEST_CASE("exact-mode reconstruction is a round trip") {
    CHECK(approx_equal(
        reconstruct(simulate_counts(DensityMatrix4{0.25 * Mat4::Identity()}, nine(), 0,
                                    CountMode::exact))
            .matrix,
        Mat4(0.25 * Mat4::Identity()), 1e-10));

    auto rng = make_rng(603);
    for (int i = 0; i < 100; ++i) {
        DensityMatrix4 rho = random_density4(rng);
        DensityMatrix4 estimate = reconstruct(simulate_counts(rho, nine(), 0, CountMode::exact));
        CHECK(trace_distance(rho, estimate) <= 1e-10);
    }
}

TEST_CASE("reconstruction requires all nine settings") {
    auto rng = make_rng(604);
    DensityMatrix4 rho = random_density4(rng);
    auto records = simulate_counts(rho, nine(), 0, CountMode::exact);
    records.pop_back();
    CHECK_THROWS_AS(reconstruct(records), Error);
}

TEST_CASE("sampled reconstruction error shrinks like one over sqrt shots") {
    DensityMatrix4 rho = PureState2Q::bell_phi_plus().to_density();
    auto median_distance = [&](long long shots) {
        std::vector<double> distances;
        for (std::uint64_t seed = 0; seed < 9; ++seed) {
            auto est = reconstruct(simulate_counts(rho, nine(), shots, CountMode::sampled, seed));
            distances.push_back(trace_distance(rho, est));
        }
        std::sort(distances.begin(), distances.end());
        return distances[distances.size() / 2];
    };
    const double coarse = median_distance(10000);
    const double fine = median_distance(1000000);
    const double ratio = coarse / fine;
    CHECK(ratio >= 5.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("concurrence of reference states") {
    CHECK(concurrence(PureState2Q::bell_phi_plus().to_density()) ==
          doctest::Approx(1.0).epsilon(1e-12));

    Vec4 product = Vec4::Zero();
    product(1) = 1;  // |HV>
    CHECK(concurrence(PureState2Q{product}.to_density()) <= 1e-10);

    // Schmidt states: C = sin(2 alpha), cross-checked against the eigenvalue
    // definition used by the implementation.
    for (double alpha : {0.1, 0.3, 0.6, M_PI / 4}) {
        CHECK(concurrence(PureState2Q::schmidt(alpha).to_density()) ==
              doctest::Approx(std::sin(2 * alpha)).epsilon(1e-10));
    }
}

TEST_CASE("concurrence is invariant under local unitaries") {
    auto rng = make_rng(605);
    for (int i = 0; i < 60; ++i) {
        DensityMatrix4 rho = random_density4(rng);
        const double reference = concurrence(rho);
        Mat4 u = kron(random_unitary2(rng), random_unitary2(rng));
        DensityMatrix4 rotated{u * rho.matrix * u.adjoint()};
        CHECK(concurrence(rotated) == doctest::Approx(reference).epsilon(1e-10));
    }
}

TEST_CASE("entanglement of formation endpoints and the C = 1/2 value") {
    CHECK(concurrence_to_eof(0.0) == doctest::Approx(0.0));
    CHECK(concurrence_to_eof(1.0) == doctest::Approx(1.0));

    // h((1 + sqrt(3)/2) / 2), evaluated independently
    const double x = 0.5 * (1.0 + std::sqrt(3.0) / 2.0);
    const double expected = -x * std::log2(x) - (1 - x) * std::log2(1 - x);
    CHECK(concurrence_to_eof(0.5) == doctest::Approx(expected).epsilon(1e-12));

    // against a state with C = 1/2: sin(2a) = 1/2
    const double alpha = 0.5 * std::asin(0.5);
    CHECK(entanglement_of_formation(PureState2Q::schmidt(alpha).to_density()) ==
          doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("entanglement of formation is monotone in concurrence") {
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double eof = concurrence_to_eof(i / 100.0);
        CHECK(eof >= prev - 1e-15);
        prev = eof;
    }
}
