#include "holonomylab/experiment.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "holonomylab/braid.hpp"
#include "holonomylab/error.hpp"
#include "holonomylab/gates.hpp"

namespace hlab {

namespace {

using json = nlohmann::json;
using cd = std::complex<double>;

class Context {
public:
    Context(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

    /// 1-based line of the first occurrence of "key" in the document.
    int line_of(const std::string& key) const {
        const auto pos = text_.find('"' + key + '"');
        if (pos == std::string::npos) return 1;
        int line = 1;
        for (std::size_t i = 0; i < pos; ++i) line += text_[i] == '\n';
        return line;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        throw ConfigError(source_ + ":" + std::to_string(line_of(key)) + ": " + msg);
    }

    bool anchored(const std::string& msg) const { return msg.rfind(source_ + ":", 0) == 0; }

    template <class F>
    auto within(const std::string& key, F&& f) const -> decltype(f()) {
        try {
            return f();
        } catch (const ConfigError& e) {
            if (anchored(e.what())) throw;
            fail(key, key + ": " + e.what());
        }
    }

    void allow_only(const json& obj, const std::string& where, std::initializer_list<const char*> keys) const {
        if (!obj.is_object()) fail(where, where + ": expected an object");
        for (const auto& [key, _] : obj.items()) {
            bool ok = false;
            for (const char* k : keys) ok = ok || key == k;
            if (!ok) fail(key, where + ": unknown key \"" + key + "\"");
        }
    }

    double number(const json& obj, const char* key, const std::string& where) const {
        if (!obj.contains(key) || !obj.at(key).is_number()) {
            fail(obj.contains(key) ? key : where, where + ": missing numeric field \"" + key + "\"");
        }
        return obj.at(key).get<double>();
    }

    std::string string(const json& obj, const char* key, const std::string& where) const {
        if (!obj.contains(key) || !obj.at(key).is_string()) {
            fail(obj.contains(key) ? key : where, where + ": missing string field \"" + key + "\"");
        }
        return obj.at(key).get<std::string>();
    }

    Edge edge(const json& v, const char* key) const {
        if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string()) {
            fail(key, std::string(key) + ": expected a pair of site labels");
        }
        return {v[0].get<std::string>(), v[1].get<std::string>()};
    }

private:
    const std::string& text_;
    std::string source_;
};

CavityNetwork parse_network(const Context& ctx, const json& v, const std::filesystem::path& base_dir) {
    if (v.is_string()) return presets::network_by_name(v.get<std::string>(), presets::paper_cavity());
    if (!v.is_object()) ctx.fail("network", "network: expected a preset name or an object");
    if (v.contains("preset")) {
        ctx.allow_only(v, "network", {"preset", "cavity"});
        const auto cavity = v.contains("cavity") ? presets::cavity_by_name(ctx.string(v, "cavity", "network"))
                                                 : presets::paper_cavity();
        return presets::network_by_name(ctx.string(v, "preset", "network"), cavity);
    }
    if (v.contains("file")) {
        ctx.allow_only(v, "network", {"file"});
        std::filesystem::path file = ctx.string(v, "file", "network");
        if (file.is_relative()) file = base_dir / file;
        return CavityNetwork::load(file);
    }
    return CavityNetwork::from_json(v);
}

LegTiming parse_timing(const Context& ctx, const json& p) {
    if (p.contains("leg_duration_s")) {
        if (p.contains("leg_timing")) ctx.fail("leg_timing", "path: give either leg_duration_s or leg_timing");
        return LegTiming::fixed(ctx.number(p, "leg_duration_s", "path"));
    }
    int order = 1;
    if (p.contains("resonance_order")) {
        if (!p["resonance_order"].is_number_integer()) ctx.fail("resonance_order", "path: resonance_order must be an integer");
        order = p["resonance_order"].get<int>();
    }
    if (p.contains("leg_timing") && p["leg_timing"] != "resonant") {
        ctx.fail("leg_timing", "path: leg_timing must be \"resonant\"");
    }
    return LegTiming::resonant(order);
}

std::vector<Edge> parse_axes(const Context& ctx, const json& p, const char* key) {
    if (!p.contains(key) || !p[key].is_array()) ctx.fail(key, std::string("path: \"") + key + "\" must be a list of edges");
    std::vector<Edge> axes;
    for (const auto& e : p[key]) axes.push_back(ctx.edge(e, key));
    return axes;
}

ControlPath parse_path(const Context& ctx, const json& p, std::string& type) {
    if (!p.is_object()) ctx.fail("path", "path: expected an object");
    type = ctx.string(p, "type", "path");
    const char* timing_keys[] = {"leg_duration_s", "leg_timing", "resonance_order", "total_duration_s"};
    (void)timing_keys;

    ControlPath path = [&]() -> ControlPath {
        if (type == "constant") {
            ctx.allow_only(p, "path", {"type", "edges", "kappa_hz", "duration_s"});
            const auto axes = parse_axes(ctx, p, "edges");
            if (!p.contains("kappa_hz") || !p["kappa_hz"].is_array() || p["kappa_hz"].size() != axes.size()) {
                ctx.fail("kappa_hz", "path: kappa_hz needs one value per edge");
            }
            Eigen::VectorXd k(static_cast<Eigen::Index>(axes.size()));
            for (std::size_t i = 0; i < axes.size(); ++i) {
                if (!p["kappa_hz"][i].is_number()) ctx.fail("kappa_hz", "path: kappa_hz values must be numbers");
                k(static_cast<Eigen::Index>(i)) = p["kappa_hz"][i].get<double>();
            }
            return ctx.within("duration_s", [&] { return constant_hopping(axes, k, ctx.number(p, "duration_s", "path")); });
        }
        if (type == "quarter_circle") {
            ctx.allow_only(p, "path", {"type", "from", "to", "kappa_max_hz", "duration_s"});
            if (!p.contains("from") || !p.contains("to")) ctx.fail("path", "path: quarter_circle needs from and to");
            return ctx.within("duration_s", [&] {
                return quarter_circle(ctx.edge(p["from"], "from"), ctx.edge(p["to"], "to"),
                                      ctx.number(p, "kappa_max_hz", "path"), ctx.number(p, "duration_s", "path"));
            });
        }
        if (type == "half_circle") {
            ctx.allow_only(p, "path", {"type", "axis_1", "axis_2", "kappa_max_hz", "duration_s"});
            if (!p.contains("axis_1") || !p.contains("axis_2")) ctx.fail("path", "path: half_circle needs axis_1 and axis_2");
            return ctx.within("duration_s", [&] {
                return half_circle(ctx.edge(p["axis_1"], "axis_1"), ctx.edge(p["axis_2"], "axis_2"),
                                   ctx.number(p, "kappa_max_hz", "path"), ctx.number(p, "duration_s", "path"));
            });
        }
        if (type == "octant") {
            ctx.allow_only(p, "path", {"type", "axes", "kappa_max_hz", "leg_duration_s", "leg_timing",
                                       "resonance_order", "total_duration_s"});
            const auto axes = parse_axes(ctx, p, "axes");
            if (axes.size() != 3) ctx.fail("axes", "path: octant needs exactly three axes");
            return ctx.within("axes", [&] {
                return octant_loop({axes[0], axes[1], axes[2]}, ctx.number(p, "kappa_max_hz", "path"),
                                   parse_timing(ctx, p));
            });
        }
        if (type == "geodesic_loop") {
            ctx.allow_only(p, "path", {"type", "axes", "vertices", "kappa_max_hz", "leg_duration_s",
                                       "leg_timing", "resonance_order", "total_duration_s"});
            const auto axes = parse_axes(ctx, p, "axes");
            if (!p.contains("vertices") || !p["vertices"].is_array()) ctx.fail("vertices", "path: vertices must be a list");
            std::vector<Direction> vertices;
            for (const auto& v : p["vertices"]) {
                if (!v.is_array()) ctx.fail("vertices", "path: each vertex must be a list of numbers");
                Direction d(static_cast<Eigen::Index>(v.size()));
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (!v[i].is_number()) ctx.fail("vertices", "path: each vertex must be a list of numbers");
                    d(static_cast<Eigen::Index>(i)) = v[i].get<double>();
                }
                vertices.push_back(d);
            }
            return ctx.within("vertices", [&] {
                return geodesic_loop(axes, vertices, ctx.number(p, "kappa_max_hz", "path"), parse_timing(ctx, p));
            });
        }
        if (type == "braid") {
            ctx.allow_only(p, "path", {"type", "word", "kappa_max_hz", "leg_duration_s", "leg_timing",
                                       "resonance_order", "total_duration_s"});
            return ctx.within("word", [&] {
                return compile_braid(BraidWord::parse(ctx.string(p, "word", "path")),
                                     ctx.number(p, "kappa_max_hz", "path"), parse_timing(ctx, p));
            });
        }
        if (type == "hadamard") {
            ctx.allow_only(p, "path", {"type", "kappa_max_hz", "leg_duration_s", "leg_timing",
                                       "resonance_order", "total_duration_s"});
            return ctx.within("type", [&] {
                return hadamard_path(ctx.number(p, "kappa_max_hz", "path"), parse_timing(ctx, p));
            });
        }
        ctx.fail("type", "path: unknown type \"" + type + "\"");
    }();
    if (p.contains("total_duration_s")) {
        path = ctx.within("total_duration_s", [&] {
            return path.with_total_duration(ctx.number(p, "total_duration_s", "path"));
        });
    }
    return path;
}

std::vector<std::pair<std::string, StateVector>> parse_inputs(const Context& ctx, const json& v,
                                                             const CavityNetwork& network) {
    std::vector<std::pair<std::string, StateVector>> out;
    auto site = [&](const std::string& label) {
        return ctx.within("initial", [&] { return site_state(network, label); });
    };
    if (v.is_string()) {
        out.emplace_back(v.get<std::string>(), site(v.get<std::string>()));
        return out;
    }
    if (!v.is_object()) ctx.fail("initial", "initial: expected a site label or an object");
    ctx.allow_only(v, "initial", {"site", "basis", "amplitudes"});
    if (v.size() != 1) ctx.fail("initial", "initial: give exactly one of site, basis, amplitudes");
    if (v.contains("site")) {
        const auto label = ctx.string(v, "site", "initial");
        out.emplace_back(label, site(label));
    } else if (v.contains("basis")) {
        if (!v["basis"].is_array() || v["basis"].empty()) ctx.fail("basis", "initial: basis must be a nonempty list");
        for (const auto& s : v["basis"]) {
            if (!s.is_string()) ctx.fail("basis", "initial: basis entries must be site labels");
            out.emplace_back(s.get<std::string>(), site(s.get<std::string>()));
        }
    } else {
        const auto& a = v["amplitudes"];
        if (!a.is_object()) ctx.fail("amplitudes", "initial: amplitudes must map site labels to [re, im]");
        StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(network.size()));
        for (const auto& [label, z] : a.items()) {
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
                ctx.fail("amplitudes", "initial: amplitude of " + label + " must be [re, im]");
            }
            const auto i = ctx.within("amplitudes", [&] { return network.index_of(label); });
            psi(static_cast<Eigen::Index>(i)) = cd(z[0].get<double>(), z[1].get<double>());
        }
        if (psi.norm() == 0.0) ctx.fail("amplitudes", "initial: amplitudes are all zero");
        out.emplace_back("custom", psi);
    }
    return out;
}

json complex_pair(cd z) { return json::array({z.real(), z.imag()}); }

void write_waveform_csv(const std::filesystem::path& file, const Trajectory& traj, const std::vector<double>& w) {
    std::ofstream out(file);
    out << "time_s,signal\n";
    char buf[64];
    for (std::size_t k = 0; k < w.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.9g,%.12e\n", traj.times[k], w[k]);
        out << buf;
    }
}

InputReport describe_output(const std::string& input, const Eigen::VectorXcd& amps,
                            const std::vector<std::string>& labels) {
    InputReport r;
    r.site = input;
    const double total = amps.squaredNorm();
    Eigen::Index dom = 0;
    amps.cwiseAbs2().maxCoeff(&dom);
    r.dominant = labels[static_cast<std::size_t>(dom)];
    r.sign = amps(dom).real() >= 0.0 ? 1 : -1;
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
        const double ratio = total > 0.0 ? std::norm(amps(i)) / total : 0.0;
        r.ratios.push_back(ratio);
        if (ratio >= 1e-4) {
            r.phases.push_back(relative_phase(amps, static_cast<std::size_t>(i), static_cast<std::size_t>(dom)));
        } else {
            r.phases.emplace_back();
        }
    }
    return r;
}

} // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text, const std::string& source_name,
                                         const std::filesystem::path& base_dir) {
    Context ctx(text, source_name);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source_name + ": " + e.what());
    }
    ctx.allow_only(doc, "config", {"version", "name", "description", "network", "path", "initial",
                                   "integration", "outputs"});
    if (!doc.contains("version") || doc["version"] != 1) ctx.fail("version", "config: \"version\": 1 is required");
    for (const char* key : {"network", "path", "initial"}) {
        if (!doc.contains(key)) ctx.fail("version", std::string("config: missing \"") + key + "\"");
    }

    CavityNetwork network = ctx.within("network", [&] { return parse_network(ctx, doc["network"], base_dir); });
    std::string type;
    ControlPath path = ctx.within("path", [&] { return parse_path(ctx, doc["path"], type); });
    ctx.within("path", [&] { bind_axes(network, path); return 0; });
    auto inputs = parse_inputs(ctx, doc["initial"], network);

    EvolveOptions evolve;
    if (doc.contains("integration")) {
        const auto& in = doc["integration"];
        ctx.allow_only(in, "integration", {"dt_s", "frame", "sample_interval_s"});
        if (in.contains("dt_s")) evolve.dt_s = ctx.number(in, "dt_s", "integration");
        if (in.contains("sample_interval_s")) evolve.sample_interval_s = ctx.number(in, "sample_interval_s", "integration");
        if (in.contains("frame")) {
            evolve.frame = ctx.within("frame", [&] { return parse_frame(ctx.string(in, "frame", "integration")); });
        }
        if (!(evolve.dt_s > 0.0)) ctx.fail("dt_s", "integration: dt_s must be positive");
        if (!(evolve.sample_interval_s > 0.0)) ctx.fail("sample_interval_s", "integration: sample_interval_s must be positive");
    }

    ExperimentConfig cfg{std::move(network), std::move(path), type, std::move(inputs), evolve, true, false, std::nullopt};
    if (doc.contains("outputs")) {
        const auto& o = doc["outputs"];
        ctx.allow_only(o, "outputs", {"trajectory", "path", "waveform"});
        if (o.contains("trajectory")) {
            if (!o["trajectory"].is_boolean()) ctx.fail("trajectory", "outputs: trajectory must be a boolean");
            cfg.write_trajectory = o["trajectory"].get<bool>();
        }
        if (o.contains("path")) {
            if (!o["path"].is_boolean()) ctx.fail("path", "outputs: path must be a boolean");
            cfg.write_path = o["path"].get<bool>();
        }
        if (o.contains("waveform")) {
            const auto& w = o["waveform"];
            ctx.allow_only(w, "waveform", {"site", "carrier_hz"});
            const auto site = ctx.string(w, "site", "waveform");
            ctx.within("waveform", [&] { return cfg.network.index_of(site); });
            const double carrier = ctx.number(w, "carrier_hz", "waveform");
            if (!(carrier > 0.0)) ctx.fail("carrier_hz", "waveform: carrier_hz must be positive");
            cfg.waveform = std::make_pair(site, carrier);
        }
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), file.string(), file.parent_path());
}

json run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto& labels = config.network.labels();

    json summary;
    summary["version"] = 1;
    summary["kind"] = "run";
    summary["network"] = {{"sites", labels}};
    summary["path"] = {{"type", config.path_type},
                       {"kappa_max_hz", config.path.kappa_max_hz()},
                       {"t_m_s", config.path.total_duration()},
                       {"legs", config.path.legs().size()},
                       {"closed", config.path.closed()}};
    summary["integration"] = {{"dt_s", config.evolve.dt_s}, {"frame", frame_name(config.evolve.frame)}};

    json runs = json::array();
    json output_map = json::array();
    for (const auto& [name, psi0] : config.inputs) {
        const Trajectory traj = evolve(config.network, config.path, psi0, config.evolve);
        summary["integration"]["step_s"] = traj.step_s;
        const StateVector& psi = traj.final_state();
        const double total = psi.squaredNorm();
        if (!(total > 0.0)) throw NumericalError("final state vanished");

        json run;
        run["input"] = name;
        run["final_time_s"] = traj.duration();
        run["total_energy"] = total;
        json amps = json::object(), ratios = json::object(), phases = json::object();
        const InputReport rep = describe_output(name, psi, labels);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            amps[labels[i]] = complex_pair(psi(static_cast<Eigen::Index>(i)));
            ratios[labels[i]] = rep.ratios[i];
            phases[labels[i]] = rep.phases[i] ? json(*rep.phases[i]) : json(nullptr);
        }
        run["final_amplitudes"] = amps;
        run["transfer_ratios"] = ratios;
        run["phases_rad"] = phases;
        run["dominant_site"] = rep.dominant;
        run["dominant_sign"] = rep.sign;
        const bool single_site = config.network.has_site(name) && config.path_type == "constant";
        const auto period = single_site ? energy_return_period(traj, name) : std::nullopt;
        run["energy_return_period_s"] = period ? json(*period) : json(nullptr);
        runs.push_back(run);
        output_map.push_back({{"input", name},
                              {"output", rep.dominant},
                              {"sign", rep.sign},
                              {"eta", rep.ratios[config.network.index_of(rep.dominant)]}});

        if (config.write_trajectory) {
            std::ofstream out(out_dir / ("trajectory_" + name + ".csv"));
            write_trajectory_csv(out, traj);
        }
        if (config.waveform) {
            const auto w = render_waveform(traj, config.waveform->first, config.waveform->second);
            write_waveform_csv(out_dir / ("waveform_" + name + ".csv"), traj, w);
        }
    }
    summary["runs"] = runs;
    summary["output_map"] = output_map;
    if (config.write_path && !config.path.legs().empty()) {
        std::ofstream out(out_dir / "path.csv");
        write_path_csv(out, config.path, config.evolve.sample_interval_s);
    }
    validate_run_summary(summary);
    std::ofstream(out_dir / "summary.json") << summary.dump(2) << '\n';
    return summary;
}

void validate_run_summary(const json& s) {
    auto need = [](const json& obj, const char* key, const char* where) -> const json& {
        if (!obj.is_object() || !obj.contains(key)) {
            throw ConfigError(std::string("summary: missing ") + where + "." + key);
        }
        return obj.at(key);
    };
    if (need(s, "version", "summary") != 1) throw ConfigError("summary: version must be 1");
    if (need(s, "kind", "summary") != "run") throw ConfigError("summary: kind must be \"run\"");
    const auto& sites = need(need(s, "network", "summary"), "sites", "network");
    if (!sites.is_array() || sites.empty()) throw ConfigError("summary: network.sites must be a nonempty list");
    const auto& path = need(s, "path", "summary");
    for (const char* k : {"type", "kappa_max_hz", "t_m_s", "legs", "closed"}) need(path, k, "path");
    const auto& integ = need(s, "integration", "summary");
    for (const char* k : {"dt_s", "frame", "step_s"}) need(integ, k, "integration");
    const auto& runs = need(s, "runs", "summary");
    if (!runs.is_array() || runs.empty()) throw ConfigError("summary: runs must be a nonempty list");
    for (const auto& r : runs) {
        for (const char* k : {"input", "final_time_s", "total_energy", "final_amplitudes", "transfer_ratios",
                              "phases_rad", "dominant_site", "dominant_sign", "energy_return_period_s"}) {
            need(r, k, "runs[]");
        }
        double sum = 0.0;
        for (const auto& site : sites) {
            const auto label = site.get<std::string>();
            const auto& eta = need(r["transfer_ratios"], label.c_str(), "transfer_ratios");
            if (!eta.is_number() || eta.get<double>() < 0.0 || eta.get<double>() > 1.0) {
                throw ConfigError("summary: transfer ratio outside [0, 1]");
            }
            sum += eta.get<double>();
            const auto& z = need(r["final_amplitudes"], label.c_str(), "final_amplitudes");
            if (!z.is_array() || z.size() != 2) throw ConfigError("summary: amplitudes must be [re, im]");
        }
        if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("summary: transfer ratios do not sum to 1");
        const int sign = r["dominant_sign"].get<int>();
        if (sign != 1 && sign != -1) throw ConfigError("summary: dominant_sign must be +1 or -1");
    }
    const auto& map = need(s, "output_map", "summary");
    if (!map.is_array() || map.size() != runs.size()) throw ConfigError("summary: output_map must match runs");
}

json VerifyReport::to_json() const {
    json inputs_json = json::array();
    for (const auto& in : inputs) {
        json ratios = json::object(), phases = json::object();
        for (std::size_t i = 0; i < protocol.basis.size(); ++i) {
            ratios[protocol.basis[i]] = in.ratios[i];
            phases[protocol.basis[i]] = in.phases[i] ? json(*in.phases[i]) : json(nullptr);
        }
        inputs_json.push_back({{"input", in.site},
                               {"output", in.dominant},
                               {"sign", in.sign},
                               {"ratios", ratios},
                               {"phases_rad", phases}});
    }
    json target = json::array();
    for (Eigen::Index i = 0; i < protocol.target.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < protocol.target.cols(); ++j) row.push_back(protocol.target(i, j));
        target.push_back(row);
    }
    return {{"version", 1},
            {"kind", "verify"},
            {"gate", protocol.name},
            {"basis", protocol.basis},
            {"target", target},
            {"t_m_s", protocol.path.total_duration()},
            {"kappa_max_hz", protocol.path.kappa_max_hz()},
            {"adiabatic", adiabatic.to_json()},
            {"dynamic", dynamic.to_json()},
            {"inputs", inputs_json},
            {"simultaneous_phase_rad", simultaneous_phase ? json(*simultaneous_phase) : json(nullptr)},
            {"passed", passed}};
}

VerifyReport verify_gate(const std::string& gate, const VerifySettings& settings) {
    const LegTiming timing = settings.leg_duration_s ? LegTiming::fixed(*settings.leg_duration_s)
                                                     : LegTiming::resonant();
    GateProtocol protocol = make_gate_protocol(gate, settings.kappa_max_hz, timing,
                                               presets::cavity_by_name(settings.cavity));
    if (settings.total_duration_s) protocol.path = protocol.path.with_total_duration(*settings.total_duration_s);
    const Eigen::MatrixXcd basis = site_basis(protocol.network, protocol.basis);

    VerifyReport report{protocol, {}, {}, {}, std::nullopt, false};
    report.adiabatic = adiabatic_holonomy(protocol.network, protocol.path, basis, settings.adiabatic_steps);
    report.adiabatic.fidelity = gate_fidelity(report.adiabatic.matrix, protocol.target);

    DynamicOptions opts;
    opts.evolve.dt_s = settings.dt_s;
    report.dynamic = dynamic_holonomy(protocol.network, protocol.path, basis, opts);
    report.dynamic.fidelity = gate_fidelity(report.dynamic.matrix, protocol.target);

    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        report.inputs.push_back(describe_output(protocol.basis[static_cast<std::size_t>(j)],
                                                report.dynamic.amplitudes.col(j), protocol.basis));
    }
    if (basis.cols() == 2) {
        const Eigen::VectorXcd both = report.dynamic.amplitudes * Eigen::Vector2cd(1.0, 1.0);
        try {
            report.simultaneous_phase = relative_phase(both, 0, 1);
        } catch (const NumericalError&) {
        }
    }
    report.passed = *report.adiabatic.fidelity >= settings.threshold &&
                    *report.dynamic.fidelity >= settings.threshold;
    return report;
}

} // namespace hlab
