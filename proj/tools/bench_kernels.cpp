// Times the batch kernels in serial and OpenMP-parallel mode and checks that
// both modes produce identical results.

#include "entconc/batch.hpp"
#include "entconc/tomography.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef ENTCONC_HAVE_OPENMP
#include <omp.h>
#endif

namespace {

using namespace entconc;

double time_ms(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

void report(const char* name, double serial_ms, double parallel_ms, double max_dev) {
    std::printf("%-22s %10.1f ms %10.1f ms %8.2fx   max|delta| %.3g\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms, max_dev);
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(n > 1 ? lo + (hi - lo) * i / (n - 1) : lo);
    return out;
}

}  // namespace

int main() {
#ifdef ENTCONC_HAVE_OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; parallel mode falls back to serial\n");
#endif
    std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        auto alphas = linspace(0.0, M_PI / 4, 60);
        auto betas = linspace(0.0, M_PI / 4, 60);
        std::vector<PureGridPoint> a, b;
        const double ts = time_ms([&] { a = run_pure_grid(alphas, betas, ExecMode::serial); });
        const double tp = time_ms([&] { b = run_pure_grid(alphas, betas, ExecMode::parallel); });
        double dev = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            dev = std::max(dev, std::abs(a[i].probability - b[i].probability));
            dev = std::max(dev, std::abs(a[i].fidelity - b[i].fidelity));
        }
        report("pure-grid 60x60", ts, tp, dev);
    }

    {
        auto rng = make_rng(7);
        DensityMatrix4 rho = random_density4(rng);
        McFilterBest a, b;
        const double ts =
            time_ms([&] { a = mc_filter_search(rho, 40000, 11, 0.0, ExecMode::serial); });
        const double tp =
            time_ms([&] { b = mc_filter_search(rho, 40000, 11, 0.0, ExecMode::parallel); });
        report("mc-filter 4e4", ts, tp,
               std::max(std::abs(a.eof - b.eof), std::abs(a.probability - b.probability)));
    }

    {
        auto states = random_density_batch(4000, 13, ExecMode::parallel);
        std::vector<LorentzNormalForm> a, b;
        const double ts = time_ms([&] { a = batch_normal_forms(states, ExecMode::serial); });
        const double tp = time_ms([&] { b = batch_normal_forms(states, ExecMode::parallel); });
        double dev = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            dev = std::max(dev, (a[i].sigma - b[i].sigma).cwiseAbs().maxCoeff());
        report("normal-forms 4e3", ts, tp, dev);
    }

    {
        double a = 0, b = 0;
        const double ts = time_ms(
            [&] { a = mc_pure_povm_search(M_PI / 6, M_PI / 4, 40000, 17, 0.999, ExecMode::serial); });
        const double tp = time_ms(
            [&] { b = mc_pure_povm_search(M_PI / 6, M_PI / 4, 40000, 17, 0.999, ExecMode::parallel); });
        report("mc-pure-povm 4e4", ts, tp, std::abs(a - b));
    }

    return 0;
}
