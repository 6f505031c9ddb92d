#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "holonomylab/error.hpp"
#include "holonomylab/network.hpp"

namespace hlab {

/// One protocol evaluated at every grid point: network preset, a single-leg
/// path family between two edges, the initial site and the observed site.
struct SweepExperiment {
    std::string network = "three_site";
    std::string cavity = "lossless";
    std::string path = "quarter_circle"; // quarter_circle | half_circle
    Edge from{"X", "S"};
    Edge to{"A", "X"};
    std::string initial_site = "A";
    std::string observed_site = "S";
};

struct SweepSpec {
    std::vector<double> kappa_max_hz;
    std::vector<double> t_m_s;
    SweepExperiment experiment;
    double dt_s = 1e-5;

    /// Throws ConfigError for an empty grid or non-positive values.
    void validate() const;

    /// {"version":1, "kappa_max_hz": [..] | {"start","stop","count"}, "t_m_s": ...,
    ///  "experiment": {...}, "observable": "eta_S", "dt_s": 1e-5}
    static SweepSpec from_json(const nlohmann::json& doc);
};

struct SweepRow {
    double kappa_max_hz = 0.0;
    double t_m_s = 0.0;
    double eta = std::numeric_limits<double>::quiet_NaN();
    std::string error_tag; // empty on success
};

/// Transfer ratio of a single grid point.
double simulate_point(const SweepExperiment& experiment, double kappa_max_hz, double t_m_s,
                      double dt_s);

/// One row per (kappa, t_m), kappa-major, in grid order. Failing points carry an
/// error tag. `previous` rows (from an interrupted run) are reused when their
/// grid coordinates match; only the missing points are simulated.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned parallelism = 1,
                                const std::vector<SweepRow>& previous = {});

struct ThresholdOptions {
    double t_min_s = 0.005;
    double t_max_s = 0.3;
    double coarse_step_s = 0.005;
    double resolution_s = 1e-3;
    double dt_s = 1e-5;
    SweepExperiment experiment;
};

struct ThresholdResult {
    double t_m_s = 0.0;
    double eta = 0.0;
};

class ThresholdNotFound : public NumericalError {
public:
    ThresholdNotFound(const std::string& what, double max_eta)
        : NumericalError(what), max_eta_(max_eta) {}
    double max_eta() const noexcept { return max_eta_; }

private:
    double max_eta_;
};

/// Smallest t_m with eta >= target: coarse scan, then bisection to the
/// requested resolution.
ThresholdResult find_adiabatic_threshold(double kappa_max_hz, double target_eta,
                                         const ThresholdOptions& options = {});

/// Header: kappa_max_hz,t_m_s,eta,error_tag
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

} // namespace hlab
