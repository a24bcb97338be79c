#include "entconc/random.hpp"

namespace entconc {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

std::array<long long, 4> multinomial_draw(std::mt19937_64& rng, long long n,
                                          const std::array<double, 4>& probabilities) {
    std::array<long long, 4> out{0, 0, 0, 0};
    double remaining_mass = 0.0;
    for (double p : probabilities) remaining_mass += p;
    long long remaining = n;
    for (int k = 0; k < 3 && remaining > 0; ++k) {
        if (remaining_mass <= 0.0) break;
        const double p = std::clamp(probabilities[k] / remaining_mass, 0.0, 1.0);
        std::binomial_distribution<long long> binom(remaining, p);
        const long long draw = binom(rng);
        out[k] = draw;
        remaining -= draw;
        remaining_mass -= probabilities[k];
    }
    out[3] = remaining;
    return out;
}

namespace {

cx gaussian(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double re = normal(rng);
    const double im = normal(rng);
    return cx(re, im);
}

Mat2 ginibre2(std::mt19937_64& rng) {
    Mat2 g;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) g(i, j) = gaussian(rng);
    return g;
}

}  // namespace

Mat2 random_unitary2(std::mt19937_64& rng) {
    // QR of a Ginibre matrix with the R diagonal phase fixed gives Haar.
    Mat2 g = ginibre2(rng);
    Eigen::HouseholderQR<Mat2> qr(g);
    Mat2 q = qr.householderQ();
    Mat2 r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < 2; ++i) {
        const cx d = r(i, i);
        if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

PureState2Q random_pure_state(std::mt19937_64& rng) {
    Vec4 amp;
    for (int i = 0; i < 4; ++i) amp(i) = gaussian(rng);
    amp.normalize();
    return PureState2Q{amp};
}

DensityMatrix4 random_density4(std::mt19937_64& rng) {
    Mat4 g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = gaussian(rng);
    Mat4 rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint().eval());
    return DensityMatrix4{rho};
}

PovmPair random_povm_pair(std::mt19937_64& rng, bool with_unitaries) {
    std::uniform_real_distribution<double> angle(0.0, M_PI / 2);
    PovmPair povm;
    povm.theta = angle(rng);
    povm.vartheta = angle(rng);
    if (with_unitaries) {
        povm.pre_unitary = random_unitary2(rng);
        povm.post_unitary = random_unitary2(rng);
    }
    return povm;
}

Mat2 random_filter2(std::mt19937_64& rng) {
    Mat2 g = ginibre2(rng);
    Eigen::JacobiSVD<Mat2> svd(g);
    return g / svd.singularValues()(0);
}

}  // namespace entconc
