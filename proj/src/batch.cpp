#include "entconc/batch.hpp"

#include "entconc/tomography.hpp"

namespace entconc {

namespace {

// Index-parallel loop; bodies must only touch their own slot.
template <typename Body>
void for_each_index(long long n, ExecMode mode, const Body& body) {
    if (mode == ExecMode::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (long long i = 0; i < n; ++i) body(i);
    } else {
        for (long long i = 0; i < n; ++i) body(i);
    }
}

}  // namespace

std::vector<PureGridPoint> run_pure_grid(const std::vector<double>& alphas,
                                         const std::vector<double>& betas, ExecMode mode) {
    const long long na = static_cast<long long>(alphas.size());
    const long long nb = static_cast<long long>(betas.size());
    std::vector<PureGridPoint> grid(static_cast<std::size_t>(na * nb));

    for_each_index(na * nb, mode, [&](long long idx) {
        PureGridPoint& point = grid[static_cast<std::size_t>(idx)];
        point.alpha = alphas[static_cast<std::size_t>(idx / nb)];
        point.beta = betas[static_cast<std::size_t>(idx % nb)];
        if (point.alpha > point.beta + kStructTol) {
            point.skipped = true;
            return;
        }
        ConcentrationPlan plan = plan_pure({point.alpha, point.beta});
        ConcentrationOutcome outcome = execute_plan(plan, PureState2Q::schmidt(point.alpha));
        point.probability = outcome.success_probability;
        point.predicted_probability = *plan.predicted_success_probability;
        point.fidelity = outcome.empty ? 0.0 : fidelity_to_pure(outcome.output_state, *plan.target);
    });
    return grid;
}

McFilterBest mc_filter_search(const DensityMatrix4& rho, int samples, std::uint64_t seed,
                              double min_probability, ExecMode mode) {
    std::vector<double> eofs(static_cast<std::size_t>(samples), -1.0);
    std::vector<double> probs(static_cast<std::size_t>(samples), 0.0);

    for_each_index(samples, mode, [&](long long i) {
        auto rng = make_rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
        Mat4 f = kron(random_filter2(rng), random_filter2(rng));
        Mat4 filtered = f * rho.matrix * f.adjoint();
        const double p = filtered.trace().real();
        if (p < min_probability - kStructTol || p < kZeroBranchTol) return;
        probs[static_cast<std::size_t>(i)] = p;
        eofs[static_cast<std::size_t>(i)] =
            entanglement_of_formation(DensityMatrix4{filtered / p});
    });

    McFilterBest best;
    for (std::size_t i = 0; i < eofs.size(); ++i) {
        if (eofs[i] > best.eof) {
            best.eof = eofs[i];
            best.probability = probs[i];
        }
    }
    return best;
}

double mc_pure_povm_search(double alpha, double beta, int samples, std::uint64_t seed,
                           double fidelity_floor, ExecMode mode) {
    const PureState2Q input = PureState2Q::schmidt(alpha);
    const PureState2Q target = PureState2Q::schmidt(beta);
    std::vector<double> probs(static_cast<std::size_t>(samples), 0.0);

    for_each_index(samples, mode, [&](long long i) {
        auto rng = make_rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
        Mat4 k = kron(random_filter2(rng), Mat2::Identity());
        Vec4 filtered = k * input.amplitudes;
        const double p = filtered.squaredNorm();
        if (p < kZeroBranchTol) return;
        const double fid = std::norm(target.amplitudes.dot(filtered)) / p;
        if (fid >= fidelity_floor) probs[static_cast<std::size_t>(i)] = p;
    });

    double best = 0.0;
    for (double p : probs) best = std::max(best, p);
    return best;
}

std::vector<LorentzNormalForm> batch_normal_forms(const std::vector<DensityMatrix4>& states,
                                                  ExecMode mode) {
    std::vector<LorentzNormalForm> out(states.size());
    for_each_index(static_cast<long long>(states.size()), mode, [&](long long i) {
        out[static_cast<std::size_t>(i)] =
            lorentz_normal_form(density_to_rmatrix(states[static_cast<std::size_t>(i)]));
    });
    return out;
}

std::vector<DensityMatrix4> random_density_batch(int n, std::uint64_t seed, ExecMode mode) {
    std::vector<DensityMatrix4> out(static_cast<std::size_t>(n));
    for_each_index(n, mode, [&](long long i) {
        auto rng = make_rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
        out[static_cast<std::size_t>(i)] = random_density4(rng);
    });
    return out;
}

}  // namespace entconc
