#pragma once

#include "entconc/batch.hpp"
#include "entconc/tomography.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace entconc {

enum class RunMode { pure, mixed, vbs_compare, tomography, circuit };

const char* run_mode_name(RunMode mode);
RunMode run_mode_from_name(const std::string& name);

struct StateFamily {
    std::string name;  // pure-schmidt | werner | bell-diagonal
    double alpha = 0.0;
    double p = 0.0;
    std::array<double, 4> bell{1, 0, 0, 0};
};

struct SweepParameter {
    std::string name;
    double from = 0.0;
    double to = 0.0;
    int points = 0;
};

// Versioned, JSON-backed experiment description. Exactly one input-state
// source may be set; all angles are radians; a seed is mandatory whenever a
// sampled mode is requested.
struct ExperimentConfig {
    int schema_version = 1;
    RunMode mode = RunMode::pure;

    std::optional<Vec4> amplitudes;
    std::optional<Mat4> density;
    std::optional<StateFamily> family;

    double beta = M_PI / 4;  // pure-mode target
    double eps_min = 1e-3;   // quasi-distillation grid
    int eps_points = 20;
    VbsParams vbs;
    long long shots = 0;
    bool sampled = false;
    std::vector<OpticalNetlist> netlists;  // circuit mode

    std::optional<std::uint64_t> seed;
    std::vector<SweepParameter> sweep;

    std::string out_dir = ".";
    std::string format = "json";

    static ExperimentConfig from_json(const nlohmann::json& doc);
    static ExperimentConfig from_json_text(const std::string& text);
    nlohmann::json to_json() const;

    // The state the experiment starts from.
    DensityMatrix4 input_density() const;
    std::optional<PureState2Q> input_pure() const;
};

struct ResultRecord {
    nlohmann::json document;     // deterministic payload written to disk
    double wall_time_ms = 0.0;   // reported on stderr only, never serialized
};

ResultRecord run(const ExperimentConfig& config);

// One row per grid point, ordered lexicographically by grid coordinates.
std::string sweep_table_csv(const ExperimentConfig& config, ExecMode mode = ExecMode::parallel);
nlohmann::json sweep_table_json(const ExperimentConfig& config,
                                ExecMode mode = ExecMode::parallel);

// Exit codes: 0 success, 2 config error, 3 state error, 4 protocol error.
int exit_code_for(Errc code);
nlohmann::json error_document(const Error& error);

// 17 significant digits, '.' separator, locale independent.
std::string format_double(double value);

nlohmann::json netlist_to_json(const OpticalNetlist& netlist);
OpticalNetlist netlist_from_json(const nlohmann::json& doc);

}  // namespace entconc
