#include "holonomylab/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "holonomylab/control_path.hpp"
#include "holonomylab/dynamics.hpp"

namespace hlab {

namespace {

std::string format_grid(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string format_eta(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    return buf;
}

std::vector<double> parse_axis(const nlohmann::json& v, const char* name) {
    std::vector<double> out;
    if (v.is_array()) {
        for (const auto& x : v) {
            if (!x.is_number()) throw ConfigError(std::string(name) + ": grid values must be numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }
    if (v.is_object()) {
        for (const auto& [key, _] : v.items()) {
            if (key != "start" && key != "stop" && key != "count") {
                throw ConfigError(std::string(name) + ": unknown key \"" + key + "\"");
            }
        }
        if (!v.contains("start") || !v.contains("stop") || !v.contains("count") ||
            !v["start"].is_number() || !v["stop"].is_number() || !v["count"].is_number_integer()) {
            throw ConfigError(std::string(name) + ": range needs numeric start, stop and integer count");
        }
        const double a = v["start"].get<double>();
        const double b = v["stop"].get<double>();
        const long n = v["count"].get<long>();
        if (n < 0) throw ConfigError(std::string(name) + ": negative count");
        for (long i = 0; i < n; ++i) {
            out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
        }
        return out;
    }
    throw ConfigError(std::string(name) + ": expected a list or {start, stop, count}");
}

Edge parse_edge(const nlohmann::json& v, const char* name) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string()) {
        throw ConfigError(std::string(name) + ": expected a pair of site labels");
    }
    return {v[0].get<std::string>(), v[1].get<std::string>()};
}

} // namespace

void SweepSpec::validate() const {
    if (kappa_max_hz.empty() || t_m_s.empty()) throw ConfigError("sweep grid is empty");
    for (double k : kappa_max_hz) {
        if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("sweep kappa values must be positive");
    }
    for (double t : t_m_s) {
        if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("sweep t_m values must be positive");
    }
    if (!(dt_s > 0.0)) throw ConfigError("sweep dt must be positive");
    if (experiment.path != "quarter_circle" && experiment.path != "half_circle") {
        throw ConfigError("sweep path must be quarter_circle or half_circle");
    }
}

SweepSpec SweepSpec::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("sweep spec: expected a JSON object");
    for (const auto& [key, _] : doc.items()) {
        if (key != "version" && key != "kappa_max_hz" && key != "t_m_s" && key != "experiment" &&
            key != "observable" && key != "dt_s") {
            throw ConfigError("sweep spec: unknown key \"" + key + "\"");
        }
    }
    if (!doc.contains("version") || doc["version"] != 1) {
        throw ConfigError("sweep spec: \"version\": 1 is required");
    }
    if (!doc.contains("kappa_max_hz") || !doc.contains("t_m_s")) {
        throw ConfigError("sweep spec: kappa_max_hz and t_m_s are required");
    }
    SweepSpec spec;
    spec.kappa_max_hz = parse_axis(doc["kappa_max_hz"], "kappa_max_hz");
    spec.t_m_s = parse_axis(doc["t_m_s"], "t_m_s");
    if (doc.contains("dt_s")) {
        if (!doc["dt_s"].is_number()) throw ConfigError("sweep spec: dt_s must be a number");
        spec.dt_s = doc["dt_s"].get<double>();
    }
    if (doc.contains("experiment")) {
        const auto& e = doc["experiment"];
        if (!e.is_object()) throw ConfigError("sweep spec: experiment must be an object");
        for (const auto& [key, v] : e.items()) {
            if (key == "network") spec.experiment.network = v.get<std::string>();
            else if (key == "cavity") spec.experiment.cavity = v.get<std::string>();
            else if (key == "path") spec.experiment.path = v.get<std::string>();
            else if (key == "from") spec.experiment.from = parse_edge(v, "experiment.from");
            else if (key == "to") spec.experiment.to = parse_edge(v, "experiment.to");
            else if (key == "initial") spec.experiment.initial_site = v.get<std::string>();
            else throw ConfigError("sweep spec: unknown experiment key \"" + key + "\"");
        }
    }
    if (doc.contains("observable")) {
        const std::string obs = doc["observable"].get<std::string>();
        if (obs.rfind("eta_", 0) != 0 || obs.size() <= 4) {
            throw ConfigError("sweep spec: observable must look like eta_<site>");
        }
        spec.experiment.observed_site = obs.substr(4);
    }
    spec.validate();
    // Fail early on labels rather than tagging every row.
    const auto net = presets::network_by_name(spec.experiment.network,
                                              presets::cavity_by_name(spec.experiment.cavity));
    net.index_of(spec.experiment.initial_site);
    net.index_of(spec.experiment.observed_site);
    net.edge_index(spec.experiment.from);
    net.edge_index(spec.experiment.to);
    return spec;
}

double simulate_point(const SweepExperiment& experiment, double kappa_max_hz, double t_m_s,
                      double dt_s) {
    const auto network = presets::network_by_name(experiment.network,
                                                  presets::cavity_by_name(experiment.cavity));
    const ControlPath path =
        experiment.path == "half_circle"
            ? half_circle(experiment.from, experiment.to, kappa_max_hz, t_m_s)
            : quarter_circle(experiment.from, experiment.to, kappa_max_hz, t_m_s);
    EvolveOptions opts;
    opts.dt_s = dt_s;
    opts.sample_interval_s = t_m_s; // only the endpoints are needed
    const Trajectory traj = evolve(network, path, site_state(network, experiment.initial_site), opts);
    return transfer_ratio(traj, experiment.observed_site);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned parallelism,
                                const std::vector<SweepRow>& previous) {
    spec.validate();
    std::vector<SweepRow> rows;
    for (double k : spec.kappa_max_hz) {
        for (double t : spec.t_m_s) rows.push_back({k, t, std::numeric_limits<double>::quiet_NaN(), ""});
    }

    std::map<std::pair<std::string, std::string>, const SweepRow*> done;
    for (const auto& r : previous) done[{format_grid(r.kappa_max_hz), format_grid(r.t_m_s)}] = &r;

    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto it = done.find({format_grid(rows[i].kappa_max_hz), format_grid(rows[i].t_m_s)});
        if (it != done.end()) {
            rows[i].eta = it->second->eta;
            rows[i].error_tag = it->second->error_tag;
        } else {
            todo.push_back(i);
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t n = next++; n < todo.size(); n = next++) {
            SweepRow& row = rows[todo[n]];
            try {
                row.eta = simulate_point(spec.experiment, row.kappa_max_hz, row.t_m_s, spec.dt_s);
            } catch (const ConfigError&) {
                row.error_tag = "config";
            } catch (const NumericalError&) {
                row.error_tag = "numeric";
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(todo.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return rows;
}

ThresholdResult find_adiabatic_threshold(double kappa_max_hz, double target_eta,
                                         const ThresholdOptions& options) {
    if (!(target_eta >= 0.0 && target_eta < 1.0)) {
        throw ConfigError("threshold target must lie in [0, 1)");
    }
    if (!(options.t_min_s > 0.0) || !(options.t_max_s > options.t_min_s) ||
        !(options.coarse_step_s > 0.0) || !(options.resolution_s > 0.0)) {
        throw ConfigError("invalid threshold search interval");
    }
    auto eta_at = [&](double t) { return simulate_point(options.experiment, kappa_max_hz, t, options.dt_s); };

    double best = 0.0;
    double prev_t = 0.0;
    const long n = static_cast<long>(std::floor((options.t_max_s - options.t_min_s) / options.coarse_step_s + 1e-9));
    for (long i = 0; i <= n; ++i) {
        const double t = options.t_min_s + static_cast<double>(i) * options.coarse_step_s;
        const double eta = eta_at(t);
        best = std::max(best, eta);
        if (eta >= target_eta) {
            if (i == 0) return {t, eta};
            double lo = prev_t, hi = t, hi_eta = eta;
            while (hi - lo > options.resolution_s) {
                const double mid = 0.5 * (lo + hi);
                const double e = eta_at(mid);
                if (e >= target_eta) {
                    hi = mid;
                    hi_eta = e;
                } else {
                    lo = mid;
                }
            }
            return {hi, hi_eta};
        }
        prev_t = t;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "eta >= %.4g not reached for t_m <= %.4g s (max eta %.4f)", target_eta,
                  options.t_max_s, best);
    throw ThresholdNotFound(buf, best);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "kappa_max_hz,t_m_s,eta,error_tag\n";
    for (const auto& r : rows) {
        out << format_grid(r.kappa_max_hz) << ',' << format_grid(r.t_m_s) << ','
            << (r.error_tag.empty() ? format_eta(r.eta) : std::string()) << ',' << r.error_tag << '\n';
    }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
    std::vector<SweepRow> rows;
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::size_t pos = text.find('\n');
    if (pos == std::string::npos) return rows;
    if (text.substr(0, pos) != "kappa_max_hz,t_m_s,eta,error_tag") {
        throw ConfigError("unexpected sweep CSV header");
    }
    // Only newline-terminated rows count; a torn last line is recomputed.
    for (std::size_t start = pos + 1; (pos = text.find('\n', start)) != std::string::npos; start = pos + 1) {
        const std::string line = text.substr(start, pos - start);
        std::vector<std::string> cells;
        std::size_t from = 0;
        for (std::size_t comma; (comma = line.find(',', from)) != std::string::npos; from = comma + 1) {
            cells.push_back(line.substr(from, comma - from));
        }
        cells.push_back(line.substr(from));
        if (cells.size() != 4) continue;
        try {
            SweepRow r;
            r.kappa_max_hz = std::stod(cells[0]);
            r.t_m_s = std::stod(cells[1]);
            r.error_tag = cells[3];
            if (r.error_tag.empty()) {
                r.eta = std::stod(cells[2]);
                if (format_eta(r.eta) != cells[2]) continue;
            }
            rows.push_back(r);
        } catch (const std::exception&) {
            continue;
        }
    }
    return rows;
}

} // namespace hlab
