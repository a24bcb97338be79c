#pragma once

#include "entconc/qstate.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace entconc {

// Pauli measurement bases per arm; each is realized as an analyzer rotation
// followed by a PBS and two detectors. Outcome "+1" is the detector fed by
// the transmitted (|H>-like) port.
enum class PauliBasis : int { x = 1, y = 2, z = 3 };

struct MeasurementSetting {
    PauliBasis basis_a = PauliBasis::z;
    PauliBasis basis_b = PauliBasis::z;

    // Rotation W with W sigma_basis W^dagger = sigma_z, so that a PBS after W
    // measures the declared basis.
    static Mat2 analyzer(PauliBasis basis);
    // Projector onto outcome +1/-1 of the declared basis.
    static Mat2 outcome_projector(PauliBasis basis, int outcome_index);

    static std::array<MeasurementSetting, 9> all_nine();
};

// Coincidence record for one setting; outcome index = 2*a + b where a, b are
// 0 for the "+" port. Exact mode stores real-valued expected counts.
struct CountRecord {
    MeasurementSetting setting;
    std::array<double, 4> counts{0, 0, 0, 0};
    double total = 0;
    bool sampled = false;
    std::uint64_t seed = 0;
};

enum class CountMode { exact, sampled };

std::array<double, 4> born_probabilities(const DensityMatrix4& rho,
                                         const MeasurementSetting& setting);

// Exact mode: counts = shots * probabilities (shots = 0 gives unit-normalized
// expected fractions). Sampled mode: one multinomial draw per setting,
// reproducible for a fixed seed.
std::vector<CountRecord> simulate_counts(const DensityMatrix4& rho,
                                         const std::vector<MeasurementSetting>& settings,
                                         long long shots, CountMode mode, std::uint64_t seed = 0);

// Linear inversion from the nine Pauli-pair settings, then projection to the
// closest physical state (eigenvalue clipping + trace renormalization).
DensityMatrix4 reconstruct(const std::vector<CountRecord>& records);

double concurrence(const DensityMatrix4& rho);
double binary_entropy(double x);
double concurrence_to_eof(double c);
double entanglement_of_formation(const DensityMatrix4& rho);

}  // namespace entconc
