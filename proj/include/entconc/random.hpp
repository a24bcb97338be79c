#pragma once

#include "entconc/povm.hpp"

#include <array>
#include <cstdint>
#include <random>

namespace entconc {

// splitmix64 mixing of (seed, stream index); used to hand every task of a
// batch its own independent generator so results do not depend on scheduling.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);
std::mt19937_64 make_rng(std::uint64_t seed);

std::array<long long, 4> multinomial_draw(std::mt19937_64& rng, long long n,
                                          const std::array<double, 4>& probabilities);

Mat2 random_unitary2(std::mt19937_64& rng);
PureState2Q random_pure_state(std::mt19937_64& rng);
// Full-rank (almost surely) states from the Ginibre construction G G^dag / tr.
DensityMatrix4 random_density4(std::mt19937_64& rng);
PovmPair random_povm_pair(std::mt19937_64& rng, bool with_unitaries);
// Random 2x2 contraction with largest singular value exactly 1.
Mat2 random_filter2(std::mt19937_64& rng);

}  // namespace entconc
