// Command-line front end: run, sweep, verify.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "holonomylab/error.hpp"
#include "holonomylab/experiment.hpp"
#include "holonomylab/sweeps.hpp"

namespace {

using namespace hlab;
using json = nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_config = 2;
constexpr int exit_numeric = 3;
constexpr int exit_adiabaticity = 4;

std::filesystem::path default_out() {
    if (const char* env = std::getenv("HOLONOMYLAB_OUT"); env && *env) return env;
    return "holonomylab_out";
}

json read_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open " + file.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(file.string() + ": " + e.what());
    }
}

int cmd_run(const std::string& config_file, const std::filesystem::path& out, std::optional<double> dt) {
    auto config = ExperimentConfig::load(config_file);
    if (dt) config.evolve.dt_s = *dt;
    const json summary = run_experiment(config, out);
    for (const auto& run : summary["runs"]) {
        std::printf("input %-6s -> %-3s sign %+d  eta %.6f", run["input"].get<std::string>().c_str(),
                    run["dominant_site"].get<std::string>().c_str(), run["dominant_sign"].get<int>(),
                    run["transfer_ratios"][run["dominant_site"].get<std::string>()].get<double>());
        if (!run["energy_return_period_s"].is_null()) {
            std::printf("  period %.6f s", run["energy_return_period_s"].get<double>());
        }
        std::printf("\n");
    }
    std::printf("wrote %s\n", (out / "summary.json").string().c_str());
    return exit_ok;
}

int cmd_sweep(const std::string& spec_file, const std::filesystem::path& out, std::optional<double> dt,
              unsigned parallel, bool resume, const std::string& format) {
    SweepSpec spec = SweepSpec::from_json(read_json_file(spec_file));
    if (dt) spec.dt_s = *dt;
    spec.validate();
    std::filesystem::create_directories(out);
    const auto csv_file = out / "sweep.csv";

    std::vector<SweepRow> previous;
    if (resume && std::filesystem::exists(csv_file)) {
        std::ifstream in(csv_file);
        previous = read_sweep_csv(in);
    }
    const auto rows = run_sweep(spec, parallel, previous);
    std::size_t failed = 0;
    for (const auto& r : rows) failed += !r.error_tag.empty();

    if (format == "json") {
        json doc = {{"version", 1}, {"rows", json::array()}};
        for (const auto& r : rows) {
            doc["rows"].push_back({{"kappa_max_hz", r.kappa_max_hz},
                                   {"t_m_s", r.t_m_s},
                                   {"eta", r.error_tag.empty() ? json(r.eta) : json(nullptr)},
                                   {"error_tag", r.error_tag}});
        }
        std::ofstream(out / "sweep.json") << doc.dump(2) << '\n';
    } else {
        const auto tmp = out / "sweep.csv.tmp";
        {
            std::ofstream file(tmp);
            write_sweep_csv(file, rows);
        }
        std::filesystem::rename(tmp, csv_file);
    }
    std::printf("%zu rows (%zu reused, %zu failed) -> %s\n", rows.size(), previous.size(), failed,
                (out / (format == "json" ? "sweep.json" : "sweep.csv")).string().c_str());
    return exit_ok;
}

void print_report(const VerifyReport& r) {
    std::printf("gate %s  basis (", r.protocol.name.c_str());
    for (std::size_t i = 0; i < r.protocol.basis.size(); ++i) {
        std::printf("%s%s", i ? ", " : "", r.protocol.basis[i].c_str());
    }
    std::printf(")  t_m %.6f s  kappa_max %.3f Hz\n", r.protocol.path.total_duration(),
                r.protocol.path.kappa_max_hz());
    for (const auto* res : {&r.adiabatic, &r.dynamic}) {
        std::printf("%-9s fidelity %.6f  leakage %.3e  det %+.6f  orthogonality %.2e\n",
                    res == &r.adiabatic ? "adiabatic" : "dynamic", res->fidelity.value_or(0.0), res->leakage,
                    res->determinant, res->orthogonality_defect);
        for (Eigen::Index i = 0; i < res->matrix.rows(); ++i) {
            std::printf("   ");
            for (Eigen::Index j = 0; j < res->matrix.cols(); ++j) std::printf(" %+.4f", res->matrix(i, j));
            std::printf("\n");
        }
    }
    for (const auto& in : r.inputs) {
        std::printf("from %-2s ->", in.site.c_str());
        for (std::size_t i = 0; i < in.ratios.size(); ++i) {
            std::printf(" %s %.4f", r.protocol.basis[i].c_str(), in.ratios[i]);
            if (in.phases[i] && r.protocol.basis[i] != in.dominant) std::printf(" (phase %+.4f)", *in.phases[i]);
        }
        std::printf("  dominant %s%s\n", in.sign < 0 ? "-" : "+", in.dominant.c_str());
    }
    if (r.simultaneous_phase) std::printf("phase with both inputs excited: %+.4f rad\n", *r.simultaneous_phase);
    std::printf("%s\n", r.passed ? "PASS" : "FAIL");
}

int cmd_verify(const std::string& gate, const std::filesystem::path& out, VerifySettings settings,
               const std::string& format, bool write) {
    const VerifyReport report = verify_gate(gate, settings);
    if (format == "json") {
        std::printf("%s\n", report.to_json().dump(2).c_str());
    } else {
        print_report(report);
    }
    if (write) {
        std::filesystem::create_directories(out);
        std::ofstream(out / "verify.json") << report.to_json().dump(2) << '\n';
    }
    return report.passed ? exit_ok : exit_failed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Holonomic braiding in acoustic cavity networks"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_arg;
    std::optional<double> dt;
    std::string format = "csv";
    app.add_option("--out", out_arg, "Output directory (default: $HOLONOMYLAB_OUT or ./holonomylab_out)");
    app.add_option("--dt", dt, "Integration step in seconds")->check(CLI::PositiveNumber);
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    auto* run = app.add_subcommand("run", "Run an experiment config");
    std::string config_file;
    run->add_option("config", config_file, "Experiment config (JSON)")->required();

    auto* sweep = app.add_subcommand("sweep", "Run a (kappa_max, t_m) sweep");
    std::string spec_file;
    unsigned parallel = std::max(1u, std::thread::hardware_concurrency());
    bool resume = false;
    sweep->add_option("spec", spec_file, "Sweep spec (JSON)")->required();
    sweep->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_flag("--resume", resume, "Reuse rows from an existing sweep.csv in --out");

    auto* verify = app.add_subcommand("verify", "Extract and check a gate holonomy");
    std::string gate;
    VerifySettings settings;
    std::optional<double> leg_duration, t_m;
    bool write = false;
    verify->add_option("gate", gate, "Y, Z, H, G2G1, G1G2 or a braid word such as \"G2 G1'\"")->required();
    verify->add_option("--kappa", settings.kappa_max_hz, "Maximum hopping (Hz)")->check(CLI::PositiveNumber);
    verify->add_option("--leg-duration", leg_duration, "Fixed duration per arc (s); default resonant")
        ->check(CLI::PositiveNumber);
    verify->add_option("--tm", t_m, "Rescale the whole protocol to this duration (s)")->check(CLI::PositiveNumber);
    verify->add_option("--cavity", settings.cavity, "Cavity parameters")
        ->check(CLI::IsMember({"paper", "bare", "lossless"}));
    verify->add_option("--steps", settings.adiabatic_steps, "Adiabatic transport steps")->check(CLI::Range(100, 10000000));
    verify->add_flag("--write", write, "Also write verify.json into --out");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    const std::filesystem::path out = out_arg.empty() ? default_out() : std::filesystem::path(out_arg);
    try {
        if (*run) return cmd_run(config_file, out, dt);
        if (*sweep) return cmd_sweep(spec_file, out, dt, parallel, resume, format);
        if (dt) settings.dt_s = *dt;
        settings.leg_duration_s = leg_duration;
        settings.total_duration_s = t_m;
        return cmd_verify(gate, out, settings, format, write);
    } catch (const AdiabaticityError& e) {
        std::fprintf(stderr, "adiabaticity error: %s (leakage %.4f)\n", e.what(), e.leakage());
        return exit_adiabaticity;
    } catch (const Error& e) {
        std::fprintf(stderr, "%s error: %s\n", e.category() == Error::Category::config ? "config" : "numerical",
                     e.what());
        return e.category() == Error::Category::config ? exit_config : exit_numeric;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    } catch (const std::filesystem::filesystem_error& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return exit_config;
    }
}
