#include "entconc/tomography.hpp"

#include "entconc/random.hpp"

#include <cmath>

namespace entconc {

Mat2 MeasurementSetting::analyzer(PauliBasis basis) {
    Mat2 w;
    switch (basis) {
        case PauliBasis::z:
            return Mat2::Identity();
        case PauliBasis::x:
            w << 1, 1, 1, -1;
            return w / std::sqrt(2.0);
        case PauliBasis::y:
            w << 1, cx(0, -1), 1, cx(0, 1);
            return w / std::sqrt(2.0);
    }
    return Mat2::Identity();
}

Mat2 MeasurementSetting::outcome_projector(PauliBasis basis, int outcome_index) {
    const double sign = outcome_index == 0 ? 1.0 : -1.0;
    return 0.5 * (Mat2::Identity() + sign * pauli(static_cast<int>(basis)));
}

std::array<MeasurementSetting, 9> MeasurementSetting::all_nine() {
    std::array<MeasurementSetting, 9> out;
    const std::array<PauliBasis, 3> bases{PauliBasis::x, PauliBasis::y, PauliBasis::z};
    int k = 0;
    for (PauliBasis a : bases)
        for (PauliBasis b : bases) out[k++] = MeasurementSetting{a, b};
    return out;
}

std::array<double, 4> born_probabilities(const DensityMatrix4& rho,
                                         const MeasurementSetting& setting) {
    std::array<double, 4> p{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            Mat4 proj = kron(MeasurementSetting::outcome_projector(setting.basis_a, a),
                             MeasurementSetting::outcome_projector(setting.basis_b, b));
            p[2 * a + b] = std::max(0.0, (rho.matrix * proj).trace().real());
        }
    return p;
}

std::vector<CountRecord> simulate_counts(const DensityMatrix4& rho,
                                         const std::vector<MeasurementSetting>& settings,
                                         long long shots, CountMode mode, std::uint64_t seed) {
    if (shots < 0) throw Error(Errc::invalid_shots, "negative shot count");
    if (mode == CountMode::sampled && shots == 0)
        throw Error(Errc::invalid_shots, "sampled mode needs at least one shot");
    rho.require_state();

    std::vector<CountRecord> out;
    out.reserve(settings.size());
    for (std::size_t idx = 0; idx < settings.size(); ++idx) {
        CountRecord rec;
        rec.setting = settings[idx];
        auto p = born_probabilities(rho, settings[idx]);
        if (mode == CountMode::exact) {
            const double n = shots > 0 ? static_cast<double>(shots) : 1.0;
            for (int k = 0; k < 4; ++k) rec.counts[k] = n * p[k];
            rec.total = n;
        } else {
            rec.sampled = true;
            rec.seed = seed;
            auto rng = make_rng(mix_seed(seed, idx));
            auto draw = multinomial_draw(rng, shots, p);
            for (int k = 0; k < 4; ++k) rec.counts[k] = static_cast<double>(draw[k]);
            rec.total = static_cast<double>(shots);
        }
        out.push_back(rec);
    }
    return out;
}

DensityMatrix4 reconstruct(const std::vector<CountRecord>& records) {
    // index [a][b], a/b in {0: x, 1: y, 2: z}
    const CountRecord* table[3][3] = {};
    for (const auto& rec : records) {
        const int a = static_cast<int>(rec.setting.basis_a) - 1;
        const int b = static_cast<int>(rec.setting.basis_b) - 1;
        table[a][b] = &rec;
    }
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            if (!table[a][b])
                throw Error(Errc::incomplete_settings, "nine Pauli-pair settings required");

    auto frequencies = [](const CountRecord& rec) {
        std::array<double, 4> f{};
        const double n = rec.total > 0 ? rec.total : 1.0;
        for (int k = 0; k < 4; ++k) f[k] = rec.counts[k] / n;
        return f;
    };

    RMatrix R;
    R.r(0, 0) = 1.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            auto f = frequencies(*table[a][b]);
            R.r(a + 1, b + 1) = f[0] - f[1] - f[2] + f[3];
        }
    // Marginals averaged over the partner's three settings.
    for (int a = 0; a < 3; ++a) {
        double m = 0;
        for (int b = 0; b < 3; ++b) {
            auto f = frequencies(*table[a][b]);
            m += f[0] + f[1] - f[2] - f[3];
        }
        R.r(a + 1, 0) = m / 3.0;
    }
    for (int b = 0; b < 3; ++b) {
        double m = 0;
        for (int a = 0; a < 3; ++a) {
            auto f = frequencies(*table[a][b]);
            m += f[0] - f[1] + f[2] - f[3];
        }
        R.r(0, b + 1) = m / 3.0;
    }

    return project_to_physical(rmatrix_to_density(R).matrix);
}

double concurrence(const DensityMatrix4& rho) {
    rho.require_state();
    static const Mat4 spinflip = kron(pauli(2), pauli(2));
    Mat4 m = rho.matrix * spinflip * rho.matrix.conjugate() * spinflip;
    Eigen::ComplexEigenSolver<Mat4> es(m);
    Eigen::Vector4d lambdas;
    for (int i = 0; i < 4; ++i) lambdas(i) = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
    std::sort(lambdas.data(), lambdas.data() + 4, std::greater<double>());
    const double c = lambdas(0) - lambdas(1) - lambdas(2) - lambdas(3);
    return std::clamp(c, 0.0, 1.0);
}

double binary_entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double concurrence_to_eof(double c) {
    c = std::clamp(c, 0.0, 1.0);
    return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

double entanglement_of_formation(const DensityMatrix4& rho) {
    return concurrence_to_eof(concurrence(rho));
}

}  // namespace entconc
