#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "holonomylab/control_path.hpp"
#include "holonomylab/dynamics.hpp"
#include "holonomylab/holonomy.hpp"
#include "holonomylab/network.hpp"
#include "holonomylab/protocols.hpp"

namespace hlab {

/// A parsed run configuration. Parsing is strict: unknown keys, missing
/// "version": 1, unknown site labels and malformed values are ConfigErrors whose
/// message starts with "<file>:<line>:".
struct ExperimentConfig {
    CavityNetwork network;
    ControlPath path;
    std::string path_type;
    /// (name, initial state); several entries mean one run per input.
    std::vector<std::pair<std::string, StateVector>> inputs;
    EvolveOptions evolve;
    bool write_trajectory = true;
    bool write_path = false;
    std::optional<std::pair<std::string, double>> waveform; // site, carrier Hz

    static ExperimentConfig parse(const std::string& text, const std::string& source_name = "config",
                                  const std::filesystem::path& base_dir = {});
    static ExperimentConfig load(const std::filesystem::path& file);
};

/// Runs every input, writes trajectory/waveform/path CSVs and summary.json into
/// `out_dir` and returns the summary document.
nlohmann::json run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Throws ConfigError if a summary document lacks a required field.
void validate_run_summary(const nlohmann::json& summary);

struct VerifySettings {
    double kappa_max_hz = presets::kappa0_hz;
    std::optional<double> leg_duration_s; // default: resonant timing
    std::optional<double> total_duration_s;
    double dt_s = 1e-5;
    int adiabatic_steps = 2000;
    std::string cavity = "paper";
    double threshold = 0.99;
};

struct InputReport {
    std::string site;
    std::vector<double> ratios;              // per basis site, relative
    std::vector<std::optional<double>> phases; // vs the dominant output, per basis site
    std::string dominant;
    int sign = 0;
};

struct VerifyReport {
    GateProtocol protocol;
    HolonomyResult adiabatic;
    HolonomyResult dynamic;
    std::vector<InputReport> inputs;
    /// 2x2 gates: relative phase (first, second) after exciting both basis sites.
    std::optional<double> simultaneous_phase;
    bool passed = false;

    nlohmann::json to_json() const;
};

/// Adiabatic-oracle and dynamic extraction of a named gate ("Y", "Z", "H",
/// "G2G1", "G1G2" or a braid word). Propagates AdiabaticityError.
VerifyReport verify_gate(const std::string& gate, const VerifySettings& settings);

} // namespace hlab
