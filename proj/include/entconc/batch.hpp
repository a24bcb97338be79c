#pragma once

#include "entconc/concentration.hpp"
#include "entconc/random.hpp"

#include <vector>

namespace entconc {

// Batch kernels run either serially or OpenMP-parallel. Every task derives
// its generator from (seed, task index), so both modes produce bit-identical
// results; the serial path doubles as the reference implementation in tests.
enum class ExecMode { serial, parallel };

struct PureGridPoint {
    double alpha = 0.0;
    double beta = 0.0;
    bool skipped = false;
    double probability = 0.0;
    double predicted_probability = 0.0;
    double fidelity = 0.0;
};

// Full-circuit concentration over the (alpha, beta) grid, row-major in
// (alpha index, beta index); cells with alpha > beta are skipped.
std::vector<PureGridPoint> run_pure_grid(const std::vector<double>& alphas,
                                         const std::vector<double>& betas, ExecMode mode);

struct McFilterBest {
    double eof = 0.0;
    double probability = 0.0;
};

// Random local filter pairs (largest singular value 1) applied to rho; returns
// the best output entanglement of formation among samples whose success
// probability reaches min_probability.
McFilterBest mc_filter_search(const DensityMatrix4& rho, int samples, std::uint64_t seed,
                              double min_probability, ExecMode mode);

// Random single-arm POVM branches on cos(a)|HH> + sin(a)|VV>; returns the best
// success probability among samples whose output fidelity to the beta target
// reaches fidelity_floor.
double mc_pure_povm_search(double alpha, double beta, int samples, std::uint64_t seed,
                           double fidelity_floor, ExecMode mode);

std::vector<LorentzNormalForm> batch_normal_forms(const std::vector<DensityMatrix4>& states,
                                                  ExecMode mode);

std::vector<DensityMatrix4> random_density_batch(int n, std::uint64_t seed, ExecMode mode);

}  // namespace entconc
