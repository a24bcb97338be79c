#include "entconc/runner.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <set>

namespace entconc {

namespace {

using nlohmann::json;

double finite_or_throw(double x, const char* what) {
    if (!std::isfinite(x)) throw Error(Errc::protocol_failed, std::string(what) + " is not finite");
    return x;
}

json complex_to_json(const cx& z) { return json::array({z.real(), z.imag()}); }

cx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(Errc::config_invalid, "complex numbers are [re, im] pairs");
    return cx(j[0].get<double>(), j[1].get<double>());
}

json vec4_to_json(const Vec4& v) {
    json out = json::array();
    for (int i = 0; i < 4; ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

Vec4 vec4_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4)
        throw Error(Errc::config_invalid, "amplitudes must hold four complex entries");
    Vec4 v;
    for (int i = 0; i < 4; ++i) v(i) = complex_from_json(j[i]);
    return v;
}

json mat4_to_json(const Mat4& m) {
    json out = json::array();
    for (int i = 0; i < 4; ++i) {
        json row = json::array();
        for (int j = 0; j < 4; ++j) row.push_back(complex_to_json(m(i, j)));
        out.push_back(row);
    }
    return out;
}

Mat4 mat4_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4)
        throw Error(Errc::config_invalid, "density must be a 4x4 complex matrix");
    Mat4 m;
    for (int i = 0; i < 4; ++i) {
        if (!j[i].is_array() || j[i].size() != 4)
            throw Error(Errc::config_invalid, "density must be a 4x4 complex matrix");
        for (int k = 0; k < 4; ++k) m(i, k) = complex_from_json(j[i][k]);
    }
    return m;
}

json entanglement_to_json(double c, double eof) {
    return json{{"concurrence", finite_or_throw(c, "concurrence")},
                {"eof", finite_or_throw(eof, "eof")}};
}

json spr_settings_to_json(const ConcentrationPlan& plan) {
    json out = json::object();
    for (const auto& [label, synthesis] : plan.spr_settings()) {
        out[label] = json{{"xi", synthesis.params.xi},
                          {"iota", synthesis.params.iota},
                          {"theta", synthesis.params.theta},
                          {"global_phase", synthesis.global_phase}};
    }
    return out;
}

json outcome_to_json(const ConcentrationOutcome& outcome) {
    json out;
    out["success_probability"] = finite_or_throw(outcome.success_probability, "probability");
    out["empty"] = outcome.empty;
    out["entanglement_before"] = entanglement_to_json(outcome.concurrence_before, outcome.eof_before);
    out["entanglement_after"] = entanglement_to_json(outcome.concurrence_after, outcome.eof_after);
    out["output_state"] = json{{"density", mat4_to_json(outcome.output_state.matrix)}};
    return out;
}

double r_offdiag_mass(const DensityMatrix4& rho) {
    RMat4 r = density_to_rmatrix(rho).r;
    r.diagonal().setZero();
    return r.norm();
}

PauliBasis basis_from_name(const std::string& name) {
    if (name == "x") return PauliBasis::x;
    if (name == "y") return PauliBasis::y;
    if (name == "z") return PauliBasis::z;
    throw Error(Errc::config_invalid, "unknown basis '" + name + "'");
}

const char* basis_name(PauliBasis b) {
    switch (b) {
        case PauliBasis::x: return "x";
        case PauliBasis::y: return "y";
        default: return "z";
    }
}

struct PointScalars {
    bool skipped = false;
    double success_probability = 0.0;
    std::optional<double> predicted;
    double c_before = 0.0, c_after = 0.0, eof_before = 0.0, eof_after = 0.0;
    std::optional<double> fidelity;
};

PointScalars scalars_from_document(const json& doc) {
    PointScalars s;
    const json& r = doc.at("result");
    s.success_probability = r.at("success_probability").get<double>();
    if (r.contains("predicted_success_probability"))
        s.predicted = r.at("predicted_success_probability").get<double>();
    s.c_before = r.at("entanglement_before").at("concurrence").get<double>();
    s.eof_before = r.at("entanglement_before").at("eof").get<double>();
    s.c_after = r.at("entanglement_after").at("concurrence").get<double>();
    s.eof_after = r.at("entanglement_after").at("eof").get<double>();
    if (r.contains("fidelity_to_target")) s.fidelity = r.at("fidelity_to_target").get<double>();
    return s;
}

double schmidt_angle_from_amplitudes(const Vec4& amp) {
    const double offdiag = std::abs(amp(1)) + std::abs(amp(2));
    const double imag = std::abs(amp(0).imag()) + std::abs(amp(3).imag());
    if (offdiag > 1e-9 || imag > 1e-9 || amp(0).real() < -1e-12 || amp(3).real() < -1e-12)
        throw Error(Errc::state_invalid,
                    "pure protocol needs a Schmidt-form input cos(a)|HH> + sin(a)|VV>");
    return std::atan2(amp(3).real(), amp(0).real());
}

}  // namespace

const char* run_mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::pure: return "pure";
        case RunMode::mixed: return "mixed";
        case RunMode::vbs_compare: return "vbs-compare";
        case RunMode::tomography: return "tomography";
        case RunMode::circuit: return "circuit";
    }
    return "pure";
}

RunMode run_mode_from_name(const std::string& name) {
    if (name == "pure") return RunMode::pure;
    if (name == "mixed") return RunMode::mixed;
    if (name == "vbs-compare") return RunMode::vbs_compare;
    if (name == "tomography") return RunMode::tomography;
    if (name == "circuit") return RunMode::circuit;
    throw Error(Errc::config_invalid, "unknown mode '" + name + "'");
}

std::string format_double(double value) {
    char buffer[64];
    auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                std::chars_format::general, 17);
    return std::string(buffer, result.ptr);
}

json netlist_to_json(const OpticalNetlist& netlist) {
    json elements = json::array();
    for (const auto& e : netlist.elements) {
        json el;
        switch (e.kind) {
            case OpticalElement::Kind::hwp:
                el = json{{"kind", "hwp"}, {"angle", e.angle}, {"path", e.path}};
                break;
            case OpticalElement::Kind::qwp:
                el = json{{"kind", "qwp"}, {"angle", e.angle}, {"path", e.path}};
                break;
            case OpticalElement::Kind::phase_shifter:
                el = json{{"kind", "phase-shifter"},
                          {"phase", e.phase},
                          {"component", e.component == OpticalElement::Component::h ? "h" : "v"},
                          {"path", e.path}};
                break;
            case OpticalElement::Kind::pbs: el = json{{"kind", "pbs"}}; break;
            case OpticalElement::Kind::location_not: el = json{{"kind", "location-not"}}; break;
            case OpticalElement::Kind::identity: el = json{{"kind", "identity"}}; break;
        }
        elements.push_back(el);
    }
    return json{{"arm", netlist.arm == Arm::A ? "A" : "B"}, {"elements", elements}};
}

OpticalNetlist netlist_from_json(const json& doc) {
    OpticalNetlist net;
    const std::string arm = doc.value("arm", "A");
    if (arm == "A")
        net.arm = Arm::A;
    else if (arm == "B")
        net.arm = Arm::B;
    else
        throw Error(Errc::config_invalid, "netlist arm must be A or B");

    if (!doc.contains("elements") || !doc.at("elements").is_array())
        throw Error(Errc::config_invalid, "netlist needs an elements array");
    for (const json& el : doc.at("elements")) {
        const std::string kind = el.value("kind", "");
        if (kind == "hwp")
            net.elements.push_back(OpticalElement::hwp(el.value("angle", 0.0), el.value("path", 0)));
        else if (kind == "qwp")
            net.elements.push_back(OpticalElement::qwp(el.value("angle", 0.0), el.value("path", 0)));
        else if (kind == "phase-shifter") {
            const std::string c = el.value("component", "h");
            if (c != "h" && c != "v")
                throw Error(Errc::config_invalid, "phase shifter component must be h or v");
            net.elements.push_back(OpticalElement::phase_shifter(
                el.value("phase", 0.0),
                c == "h" ? OpticalElement::Component::h : OpticalElement::Component::v,
                el.value("path", 0)));
        } else if (kind == "pbs")
            net.elements.push_back(OpticalElement::pbs());
        else if (kind == "location-not")
            net.elements.push_back(OpticalElement::location_not());
        else if (kind == "identity")
            net.elements.push_back(OpticalElement::identity());
        else
            throw Error(Errc::config_invalid, "unknown element kind '" + kind + "'");
        const int path = net.elements.back().path;
        if (path != 0 && path != 1)
            throw Error(Errc::config_invalid, "element path must be 0 or 1");
    }
    return net;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw Error(Errc::config_invalid, "config is not valid JSON");
    return from_json(doc);
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
    if (!doc.is_object()) throw Error(Errc::config_invalid, "config must be a JSON object");
    ExperimentConfig c;
    c.schema_version = doc.value("schema_version", 1);
    if (c.schema_version != 1)
        throw Error(Errc::config_invalid, "unsupported schema_version");
    if (!doc.contains("mode")) throw Error(Errc::config_invalid, "config needs a mode");
    c.mode = run_mode_from_name(doc.at("mode").get<std::string>());

    if (!doc.contains("input_state") || !doc.at("input_state").is_object())
        throw Error(Errc::config_invalid, "config needs an input_state object");
    const json& state = doc.at("input_state");
    int sources = 0;
    if (state.contains("amplitudes")) {
        c.amplitudes = vec4_from_json(state.at("amplitudes"));
        ++sources;
    }
    if (state.contains("density")) {
        c.density = mat4_from_json(state.at("density"));
        ++sources;
    }
    if (state.contains("family")) {
        StateFamily f;
        f.name = state.at("family").get<std::string>();
        if (f.name == "pure-schmidt") {
            if (!state.contains("alpha"))
                throw Error(Errc::config_invalid, "pure-schmidt needs alpha");
            f.alpha = state.at("alpha").get<double>();
        } else if (f.name == "werner") {
            if (!state.contains("p")) throw Error(Errc::config_invalid, "werner needs p");
            f.p = state.at("p").get<double>();
        } else if (f.name == "bell-diagonal") {
            if (!state.contains("weights") || !state.at("weights").is_array() ||
                state.at("weights").size() != 4)
                throw Error(Errc::config_invalid, "bell-diagonal needs four weights");
            for (int i = 0; i < 4; ++i) f.bell[i] = state.at("weights")[i].get<double>();
        } else {
            throw Error(Errc::config_invalid, "unknown state family '" + f.name + "'");
        }
        c.family = f;
        ++sources;
    }
    if (sources != 1)
        throw Error(Errc::config_invalid, "exactly one input-state source must be specified");

    const json protocol = doc.value("protocol", json::object());
    c.beta = protocol.value("beta", M_PI / 4);
    c.eps_min = protocol.value("epsilon_min", 1e-3);
    c.eps_points = protocol.value("epsilon_points", 20);
    if (protocol.contains("vbs")) {
        const json& v = protocol.at("vbs");
        c.vbs.eta_ha = v.value("eta_ha", 1.0);
        c.vbs.eta_va = v.value("eta_va", 1.0);
        c.vbs.eta_hb = v.value("eta_hb", 1.0);
        c.vbs.eta_vb = v.value("eta_vb", 1.0);
    }
    c.shots = protocol.value("shots", 0LL);
    const std::string sampling = protocol.value("sampling", "exact");
    if (sampling != "exact" && sampling != "sampled")
        throw Error(Errc::config_invalid, "sampling must be exact or sampled");
    c.sampled = sampling == "sampled";
    if (protocol.contains("netlists")) {
        for (const json& n : protocol.at("netlists")) c.netlists.push_back(netlist_from_json(n));
        if (c.netlists.size() > 2)
            throw Error(Errc::config_invalid, "at most one netlist per arm");
    }

    if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
    if (c.sampled && !c.seed)
        throw Error(Errc::config_invalid, "seed is mandatory when a sampled mode is used");

    if (doc.contains("sweep")) {
        const json& sw = doc.at("sweep");
        if (!sw.contains("parameters") || !sw.at("parameters").is_array() ||
            sw.at("parameters").empty() || sw.at("parameters").size() > 2)
            throw Error(Errc::config_invalid, "sweep needs one or two parameters");
        for (const json& p : sw.at("parameters")) {
            SweepParameter param;
            param.name = p.value("name", "");
            if (!p.contains("from") || !p.contains("to") || !p.contains("points"))
                throw Error(Errc::config_invalid, "sweep parameter needs from/to/points");
            param.from = p.at("from").get<double>();
            param.to = p.at("to").get<double>();
            param.points = p.at("points").get<int>();
            if (param.points < 0 || param.from > param.to)
                throw Error(Errc::config_invalid, "sweep bounds are malformed");
            c.sweep.push_back(param);
        }
    }

    const json output = doc.value("output", json::object());
    c.out_dir = output.value("out_dir", std::string("."));
    c.format = output.value("format", std::string("json"));
    if (c.format != "json" && c.format != "csv")
        throw Error(Errc::config_invalid, "format must be json or csv");
    return c;
}

json ExperimentConfig::to_json() const {
    json state = json::object();
    if (amplitudes) state["amplitudes"] = vec4_to_json(*amplitudes);
    if (density) state["density"] = mat4_to_json(*density);
    if (family) {
        state["family"] = family->name;
        if (family->name == "pure-schmidt") state["alpha"] = family->alpha;
        if (family->name == "werner") state["p"] = family->p;
        if (family->name == "bell-diagonal")
            state["weights"] = json::array({family->bell[0], family->bell[1], family->bell[2],
                                            family->bell[3]});
    }

    json protocol;
    protocol["beta"] = beta;
    protocol["epsilon_min"] = eps_min;
    protocol["epsilon_points"] = eps_points;
    protocol["sampling"] = sampled ? "sampled" : "exact";
    protocol["shots"] = shots;
    protocol["vbs"] = json{{"eta_ha", vbs.eta_ha},
                           {"eta_va", vbs.eta_va},
                           {"eta_hb", vbs.eta_hb},
                           {"eta_vb", vbs.eta_vb}};
    if (!netlists.empty()) {
        json nets = json::array();
        for (const auto& n : netlists) nets.push_back(netlist_to_json(n));
        protocol["netlists"] = nets;
    }

    json doc;
    doc["schema_version"] = schema_version;
    doc["mode"] = run_mode_name(mode);
    doc["input_state"] = state;
    doc["protocol"] = protocol;
    if (seed) doc["seed"] = *seed;
    if (!sweep.empty()) {
        json params = json::array();
        for (const auto& p : sweep)
            params.push_back(
                json{{"name", p.name}, {"from", p.from}, {"to", p.to}, {"points", p.points}});
        doc["sweep"] = json{{"parameters", params}};
    }
    doc["output"] = json{{"out_dir", out_dir}, {"format", format}};
    return doc;
}

DensityMatrix4 ExperimentConfig::input_density() const {
    if (auto pure = input_pure()) return pure->to_density();
    if (density) {
        DensityMatrix4 rho{*density};
        if (!rho.is_hermitian())
            throw Error(Errc::state_invalid, "inline density matrix is not Hermitian");
        if (!rho.is_unit_trace() || rho.min_eigenvalue() < -kPsdTol)
            throw Error(Errc::state_invalid, "inline density matrix is not a state");
        return rho;
    }
    const StateFamily& f = *family;
    if (f.name == "werner") {
        if (f.p < 0.0 || f.p > 1.0) throw Error(Errc::state_invalid, "werner p outside [0, 1]");
        Vec4 singlet = Vec4::Zero();
        singlet(1) = 1 / std::sqrt(2.0);
        singlet(2) = -1 / std::sqrt(2.0);
        Mat4 rho = f.p * (singlet * singlet.adjoint()) +
                   (1.0 - f.p) * 0.25 * Mat4::Identity();
        return DensityMatrix4{rho};
    }
    // bell-diagonal
    double sum = 0.0;
    for (double w : f.bell) {
        if (w < -1e-12) throw Error(Errc::state_invalid, "bell-diagonal weights must be >= 0");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error(Errc::state_invalid, "bell-diagonal weights must sum to 1");
    const double inv_sqrt2 = 1 / std::sqrt(2.0);
    std::array<Vec4, 4> bell;
    bell[0] << inv_sqrt2, 0, 0, inv_sqrt2;    // phi+
    bell[1] << inv_sqrt2, 0, 0, -inv_sqrt2;   // phi-
    bell[2] << 0, inv_sqrt2, inv_sqrt2, 0;    // psi+
    bell[3] << 0, inv_sqrt2, -inv_sqrt2, 0;   // psi-
    Mat4 rho = Mat4::Zero();
    for (int i = 0; i < 4; ++i) rho += f.bell[i] * (bell[i] * bell[i].adjoint());
    return DensityMatrix4{rho};
}

std::optional<PureState2Q> ExperimentConfig::input_pure() const {
    if (amplitudes) {
        PureState2Q psi{*amplitudes};
        if (!psi.is_normalized(1e-9))
            throw Error(Errc::state_invalid, "inline amplitudes are not normalized");
        return psi;
    }
    if (family && family->name == "pure-schmidt") {
        if (family->alpha < -1e-12 || family->alpha > M_PI / 2 + 1e-12)
            throw Error(Errc::state_invalid, "pure-schmidt alpha outside [0, pi/2]");
        return PureState2Q::schmidt(family->alpha);
    }
    return std::nullopt;
}

namespace {

json run_pure_mode(const ExperimentConfig& config) {
    auto pure = config.input_pure();
    if (!pure) throw Error(Errc::state_invalid, "pure mode needs a pure input state");
    const double alpha = schmidt_angle_from_amplitudes(pure->amplitudes);

    ConcentrationPlan plan = plan_pure({alpha, config.beta});
    ConcentrationOutcome outcome = execute_plan(plan, *pure);

    json result = outcome_to_json(outcome);
    result["predicted_success_probability"] = *plan.predicted_success_probability;
    result["fidelity_to_target"] =
        outcome.empty ? 0.0 : fidelity_to_pure(outcome.output_state, *plan.target);
    result["plan"] = json{{"omega", plan.arm_a.povm.theta},
                          {"spr_settings", spr_settings_to_json(plan)}};
    return result;
}

json run_mixed_mode(const ExperimentConfig& config) {
    DensityMatrix4 rho = config.input_density();
    LorentzNormalForm nf = lorentz_normal_form(density_to_rmatrix(rho));

    ConcentrationPlan plan = plan_mixed(rho);
    ConcentrationOutcome outcome = execute_plan(plan, rho);

    json result = outcome_to_json(outcome);
    result["predicted_success_probability"] = *plan.predicted_success_probability;
    json sigma = json::array();
    for (int i = 0; i < 4; ++i) sigma.push_back(nf.sigma(i));
    result["normal_form"] = json{{"diagonalizable", nf.diagonalizable},
                                 {"sigma", sigma},
                                 {"offdiag_mass", std::isfinite(nf.offdiag_mass)
                                                      ? json(nf.offdiag_mass)
                                                      : json(nullptr)}};
    result["output_r_offdiag_mass"] =
        outcome.empty ? 0.0 : r_offdiag_mass(outcome.output_state);
    result["plan"] = json{{"spr_settings", spr_settings_to_json(plan)}};

    if (!nf.diagonalizable) {
        json family = json::array();
        for (const auto& p : quasi_distill(rho, config.eps_min, config.eps_points)) {
            ConcentrationOutcome o = execute_plan_kraus(p, rho);
            family.push_back(json{{"success_probability", o.success_probability},
                                  {"concurrence_after", o.concurrence_after},
                                  {"eof_after", o.eof_after}});
        }
        result["quasi_family"] = family;
    }
    return result;
}

json run_vbs_mode(const ExperimentConfig& config) {
    ConcentrationPlan plan = vbs_to_plan(config.vbs);
    DensityMatrix4 rho = config.input_density();
    ConcentrationOutcome outcome = execute_plan(plan, rho);

    // Independent route: the diagonal transmission matrix applied directly.
    Mat4 t = vbs_transmission_matrix(config.vbs);
    Mat4 direct = t * rho.matrix * t.adjoint();
    const double p = direct.trace().real();
    double residual = 0.0;
    if (!outcome.empty && p > kZeroBranchTol)
        residual = max_abs_diff(outcome.output_state.matrix, Mat4(direct / p));

    json result = outcome_to_json(outcome);
    result["transmission_residual"] = residual;
    result["plan"] = json{{"spr_settings", spr_settings_to_json(plan)}};
    return result;
}

json run_tomography_mode(const ExperimentConfig& config) {
    DensityMatrix4 rho = config.input_density();
    auto settings = MeasurementSetting::all_nine();
    std::vector<MeasurementSetting> list(settings.begin(), settings.end());
    auto records = simulate_counts(rho, list, config.shots,
                                   config.sampled ? CountMode::sampled : CountMode::exact,
                                   config.seed.value_or(0));
    DensityMatrix4 estimate = reconstruct(records);

    json recs = json::array();
    for (const auto& rec : records) {
        recs.push_back(json{{"basis_a", basis_name(rec.setting.basis_a)},
                            {"basis_b", basis_name(rec.setting.basis_b)},
                            {"counts", json::array({rec.counts[0], rec.counts[1], rec.counts[2],
                                                    rec.counts[3]})},
                            {"total", rec.total},
                            {"mode", rec.sampled ? "sampled" : "exact"}});
    }

    const double c_in = concurrence(rho);
    const double c_out = concurrence(estimate);
    json result;
    result["success_probability"] = 1.0;
    result["empty"] = false;
    result["entanglement_before"] = entanglement_to_json(c_in, concurrence_to_eof(c_in));
    result["entanglement_after"] = entanglement_to_json(c_out, concurrence_to_eof(c_out));
    result["output_state"] = json{{"density", mat4_to_json(estimate.matrix)}};
    result["trace_distance"] = trace_distance(rho, estimate);
    result["records"] = recs;
    return result;
}

json run_circuit_mode(const ExperimentConfig& config) {
    if (config.netlists.empty())
        throw Error(Errc::config_invalid, "circuit mode needs protocol.netlists");
    std::set<int> arms;
    for (const auto& n : config.netlists)
        if (!arms.insert(n.arm == Arm::A ? 0 : 1).second)
            throw Error(Errc::config_invalid, "at most one netlist per arm");

    DensityMatrix4 rho = config.input_density();
    const double c_in = concurrence(rho);

    DensityMatrix4 current = rho;
    double probability = 1.0;
    json branches = json::array();
    bool empty = false;
    for (const auto& net : config.netlists) {
        Mat8 evolved = simulate_netlist(net, current);
        PostSelectedResult selected = postselect_location(evolved, 0);
        branches.push_back(json{{"arm", net.arm == Arm::A ? "A" : "B"},
                                {"location0_probability", selected.probability}});
        probability *= selected.probability;
        if (selected.empty) {
            empty = true;
            break;
        }
        current = selected.state;
    }

    json result;
    result["success_probability"] = finite_or_throw(probability, "probability");
    result["empty"] = empty;
    result["entanglement_before"] = entanglement_to_json(c_in, concurrence_to_eof(c_in));
    const double c_out = empty ? 0.0 : concurrence(current);
    result["entanglement_after"] = entanglement_to_json(c_out, concurrence_to_eof(c_out));
    result["output_state"] =
        json{{"density", mat4_to_json(empty ? Mat4::Zero().eval() : current.matrix)}};
    result["branches"] = branches;
    return result;
}

}  // namespace

ResultRecord run(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();

    json result;
    switch (config.mode) {
        case RunMode::pure: result = run_pure_mode(config); break;
        case RunMode::mixed: result = run_mixed_mode(config); break;
        case RunMode::vbs_compare: result = run_vbs_mode(config); break;
        case RunMode::tomography: result = run_tomography_mode(config); break;
        case RunMode::circuit: result = run_circuit_mode(config); break;
    }

    ResultRecord record;
    record.document = json{{"schema_version", 1},
                           {"mode", run_mode_name(config.mode)},
                           {"config", config.to_json()},
                           {"result", result}};
    record.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return record;
}

namespace {

struct SweepRow {
    std::vector<double> coordinates;
    PointScalars scalars;
};

ExperimentConfig apply_parameter(ExperimentConfig config, const std::string& name, double value) {
    if (name == "alpha") {
        if (!config.family || config.family->name != "pure-schmidt")
            throw Error(Errc::config_invalid, "sweeping alpha needs the pure-schmidt family");
        config.family->alpha = value;
    } else if (name == "beta") {
        if (config.mode != RunMode::pure)
            throw Error(Errc::config_invalid, "beta is only sweepable in pure mode");
        config.beta = value;
    } else if (name == "p") {
        if (!config.family || config.family->name != "werner")
            throw Error(Errc::config_invalid, "sweeping p needs the werner family");
        config.family->p = value;
    } else if (name == "eta-ha") {
        config.vbs.eta_ha = value;
    } else if (name == "eta-va") {
        config.vbs.eta_va = value;
    } else if (name == "eta-hb") {
        config.vbs.eta_hb = value;
    } else if (name == "eta-vb") {
        config.vbs.eta_vb = value;
    } else {
        throw Error(Errc::config_invalid, "unknown sweep parameter '" + name + "'");
    }
    return config;
}

void validate_sweep_bounds(const ExperimentConfig& config) {
    for (const auto& p : config.sweep) {
        double lo = 0.0, hi = 1.0;
        if (p.name == "alpha" || p.name == "beta") hi = M_PI / 4 + 1e-12;
        if (p.from < lo - 1e-12 || p.to > hi)
            throw Error(Errc::config_invalid,
                        "sweep bounds for " + p.name + " leave the valid range");
    }
}

std::vector<SweepRow> sweep_rows(const ExperimentConfig& config, ExecMode mode) {
    if (config.sweep.empty())
        throw Error(Errc::config_invalid, "sweep requested without sweep parameters");
    validate_sweep_bounds(config);

    auto value_at = [](const SweepParameter& p, int i) {
        if (p.points <= 1) return p.from;
        return p.from + (p.to - p.from) * i / (p.points - 1);
    };

    const bool two = config.sweep.size() == 2;
    const long long n0 = config.sweep[0].points;
    const long long n1 = two ? config.sweep[1].points : 1;
    const long long total = n0 * n1;

    std::vector<SweepRow> rows(static_cast<std::size_t>(total));
    std::vector<std::string> errors(static_cast<std::size_t>(total));

    auto body = [&](long long idx) {
        SweepRow& row = rows[static_cast<std::size_t>(idx)];
        const int i0 = static_cast<int>(idx / n1);
        const int i1 = static_cast<int>(idx % n1);
        ExperimentConfig point = config;
        point.sweep.clear();
        const double v0 = value_at(config.sweep[0], i0);
        row.coordinates.push_back(v0);
        point = apply_parameter(point, config.sweep[0].name, v0);
        if (two) {
            const double v1 = value_at(config.sweep[1], i1);
            row.coordinates.push_back(v1);
            point = apply_parameter(point, config.sweep[1].name, v1);
        }
        if (point.seed) point.seed = mix_seed(*point.seed, static_cast<std::uint64_t>(idx));

        // Documented policy: alpha > beta cells are skipped, not errors.
        if (point.mode == RunMode::pure && point.family &&
            point.family->name == "pure-schmidt" && point.family->alpha > point.beta + 1e-12) {
            row.scalars.skipped = true;
            return;
        }
        try {
            row.scalars = scalars_from_document(run(point).document);
        } catch (const Error& e) {
            errors[static_cast<std::size_t>(idx)] = e.what();
        }
    };

    if (mode == ExecMode::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < total; ++i) body(i);
    } else {
        for (long long i = 0; i < total; ++i) body(i);
    }

    for (const auto& message : errors)
        if (!message.empty()) throw Error(Errc::protocol_failed, "sweep point failed: " + message);
    return rows;
}

}  // namespace

std::string sweep_table_csv(const ExperimentConfig& config, ExecMode mode) {
    auto rows = sweep_rows(config, mode);

    std::string out;
    for (const auto& p : config.sweep) {
        out += p.name;
        out += ',';
    }
    out += "status,success_probability,predicted_success_probability,concurrence_before,"
           "eof_before,concurrence_after,eof_after,fidelity_to_target\n";

    for (const auto& row : rows) {
        for (double c : row.coordinates) {
            out += format_double(c);
            out += ',';
        }
        if (row.scalars.skipped) {
            out += "skipped,,,,,,,\n";
            continue;
        }
        out += "ok,";
        out += format_double(row.scalars.success_probability) + ',';
        out += (row.scalars.predicted ? format_double(*row.scalars.predicted) : "") + ',';
        out += format_double(row.scalars.c_before) + ',';
        out += format_double(row.scalars.eof_before) + ',';
        out += format_double(row.scalars.c_after) + ',';
        out += format_double(row.scalars.eof_after) + ',';
        out += row.scalars.fidelity ? format_double(*row.scalars.fidelity) : "";
        out += '\n';
    }
    return out;
}

nlohmann::json sweep_table_json(const ExperimentConfig& config, ExecMode mode) {
    auto rows = sweep_rows(config, mode);
    json out = json::array();
    for (const auto& row : rows) {
        json r;
        for (std::size_t k = 0; k < row.coordinates.size(); ++k)
            r[config.sweep[k].name] = row.coordinates[k];
        r["status"] = row.scalars.skipped ? "skipped" : "ok";
        if (!row.scalars.skipped) {
            r["success_probability"] = row.scalars.success_probability;
            if (row.scalars.predicted)
                r["predicted_success_probability"] = *row.scalars.predicted;
            r["concurrence_before"] = row.scalars.c_before;
            r["eof_before"] = row.scalars.eof_before;
            r["concurrence_after"] = row.scalars.c_after;
            r["eof_after"] = row.scalars.eof_after;
            if (row.scalars.fidelity) r["fidelity_to_target"] = *row.scalars.fidelity;
        }
        out.push_back(r);
    }
    return out;
}

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::config_invalid:
            return 2;
        case Errc::state_invalid:
        case Errc::not_a_state:
        case Errc::not_normalized:
        case Errc::non_hermitian_input:
            return 3;
        default:
            return 4;
    }
}

nlohmann::json error_document(const Error& error) {
    return json{{"schema_version", 1},
                {"error", json{{"code", errc_name(error.code())}, {"message", error.what()}}}};
}

}  // namespace entconc
