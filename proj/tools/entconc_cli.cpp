#include "entconc/runner.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using entconc::Errc;
using entconc::Error;
using entconc::ExperimentConfig;
using entconc::RunMode;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    std::optional<double> alpha;
    std::optional<double> beta;
};

ExperimentConfig load_config(const CommonOptions& opts, RunMode expected_mode) {
    ExperimentConfig config;
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) throw Error(Errc::config_invalid, "cannot open config " + opts.config_path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        config = ExperimentConfig::from_json_text(text);
        if (config.mode != expected_mode)
            throw Error(Errc::config_invalid,
                        std::string("config mode does not match subcommand ") +
                            entconc::run_mode_name(expected_mode));
    } else if (expected_mode == RunMode::pure && opts.alpha) {
        // Convenience path: concentrate-pure --alpha ... [--beta ...]
        config.mode = RunMode::pure;
        entconc::StateFamily family;
        family.name = "pure-schmidt";
        family.alpha = *opts.alpha;
        config.family = family;
        if (opts.beta) config.beta = *opts.beta;
    } else {
        throw Error(Errc::config_invalid, "--config is required");
    }

    if (opts.seed) config.seed = *opts.seed;
    if (opts.out_dir) config.out_dir = *opts.out_dir;
    if (opts.format) {
        if (*opts.format != "json" && *opts.format != "csv")
            throw Error(Errc::config_invalid, "format must be json or csv");
        config.format = *opts.format;
    }
    return config;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::protocol_failed, "cannot write " + path.string());
    out << text;
}

int run_single(const CommonOptions& opts, RunMode mode) {
    ExperimentConfig config = load_config(opts, mode);
    entconc::ResultRecord record = entconc::run(config);

    std::filesystem::create_directories(config.out_dir);
    const std::string text = record.document.dump(2) + "\n";
    write_file(std::filesystem::path(config.out_dir) / "result.json", text);
    std::cout << text;
    std::cerr << "wall_time_ms " << record.wall_time_ms << "\n";
    return 0;
}

int run_sweep(const CommonOptions& opts) {
    std::string text;
    ExperimentConfig config;
    {
        std::ifstream in(opts.config_path);
        if (!in) throw Error(Errc::config_invalid, "cannot open config " + opts.config_path);
        text.assign((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    }
    config = ExperimentConfig::from_json_text(text);
    if (opts.seed) config.seed = *opts.seed;
    if (opts.out_dir) config.out_dir = *opts.out_dir;
    if (opts.format) config.format = *opts.format;

    std::filesystem::create_directories(config.out_dir);
    if (config.format == "csv") {
        const std::string table = entconc::sweep_table_csv(config);
        write_file(std::filesystem::path(config.out_dir) / "sweep.csv", table);
        std::cout << table;
    } else {
        const std::string table = entconc::sweep_table_json(config).dump(2) + "\n";
        write_file(std::filesystem::path(config.out_dir) / "sweep.json", table);
        std::cout << table;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear-optical entanglement concentration simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOptions opts;
    app.add_option("--config", opts.config_path, "experiment config (JSON)");
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "override the config seed");
    std::string out_dir, format;
    auto* out_opt = app.add_option("--out-dir", out_dir, "output directory");
    auto* fmt_opt = app.add_option("--format", format, "sweep table format: json|csv");

    auto* pure = app.add_subcommand("concentrate-pure", "optimal pure-state concentration");
    double alpha = 0, beta = 0;
    auto* alpha_opt = pure->add_option("--alpha", alpha, "Schmidt angle of the source (rad)");
    auto* beta_opt = pure->add_option("--beta", beta, "Schmidt angle of the target (rad)");

    auto* mixed = app.add_subcommand("concentrate-mixed", "normal-form mixed-state concentration");
    auto* vbs = app.add_subcommand("vbs-compare", "variable-beam-splitter equivalence run");
    auto* tomo = app.add_subcommand("tomography", "simulate counts and reconstruct");
    auto* simulate = app.add_subcommand("simulate", "run configured netlists on the input state");
    auto* sweep = app.add_subcommand("sweep", "grid sweep, one row per point");

    CLI11_PARSE(app, argc, argv);

    if (*seed_opt) opts.seed = seed_value;
    if (*out_opt) opts.out_dir = out_dir;
    if (*fmt_opt) opts.format = format;
    if (*alpha_opt) opts.alpha = alpha;
    if (*beta_opt) opts.beta = beta;

    try {
        if (pure->parsed()) return run_single(opts, RunMode::pure);
        if (mixed->parsed()) return run_single(opts, RunMode::mixed);
        if (vbs->parsed()) return run_single(opts, RunMode::vbs_compare);
        if (tomo->parsed()) return run_single(opts, RunMode::tomography);
        if (simulate->parsed()) return run_single(opts, RunMode::circuit);
        if (sweep->parsed()) return run_sweep(opts);
    } catch (const Error& e) {
        std::cout << entconc::error_document(e).dump(2) << "\n";
        return entconc::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cout << nlohmann::json{{"schema_version", 1},
                                    {"error", {{"code", "ProtocolFailed"}, {"message", e.what()}}}}
                         .dump(2)
                  << "\n";
        return 4;
    }
    return 0;
}
