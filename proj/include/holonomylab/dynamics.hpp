#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "holonomylab/control_path.hpp"
#include "holonomylab/network.hpp"

namespace hlab {

/// Complex amplitude per site, in the network's basis order.
using StateVector = Eigen::VectorXcd;

StateVector site_state(const CavityNetwork& network, std::string_view label);

struct EvolveOptions {
    double dt_s = 1e-5;
    Frame frame = Frame::rotating;
    /// Output decimation; the stored grid is uniform and always contains 0 and t_m.
    double sample_interval_s = 1e-4;
    /// Extra instants whose states are kept exactly (snapped to the step grid).
    std::vector<double> capture_times;
};

struct Trajectory {
    std::vector<std::string> basis;
    std::vector<double> times;
    std::vector<StateVector> states;
    double step_s = 0.0;
    Frame frame = Frame::rotating;
    std::string schedule_id;
    std::vector<double> capture_times; // snapped
    std::vector<StateVector> captured;

    const StateVector& final_state() const { return states.back(); }
    double duration() const { return times.back(); }
    std::size_t site(std::string_view label) const;
};

/// Fixed-step classical RK4 on i dpsi/dt = H(t) psi, with H sampled at t,
/// t + h/2 and t + h. Requires dt <= 1/(50 kappa_max); in the lab frame also
/// dt <= 1/(9 f0). Every network edge must be one of the path axes.
Trajectory evolve(const CavityNetwork& network, const ControlPath& path, const StateVector& psi0,
                  const EvolveOptions& options = {});

struct DriveSpec {
    std::string site;
    double frequency_hz = 0.0;
    double amplitude = 1.0;
    double duration_s = 0.0;
};

struct DriveResult {
    StateVector state; // normalized
    StateVector raw;   // un-normalized, in the drive's arbitrary units
};

/// Resonant source on one site with every coupling switched off:
/// i dpsi/dt = H0 psi + amplitude * exp(-i 2 pi f t) |site>, psi(0) = 0.
DriveResult prepare_by_drive(const CavityNetwork& network, const DriveSpec& drive,
                             double dt_s = 1e-5, Frame frame = Frame::rotating);

/// |psi_i|^2 per sample (rows) and site (columns).
Eigen::MatrixXd site_energies(const Trajectory& traj);

/// |psi_site(t_m)|^2 / sum_j |psi_j(t_m)|^2. Throws NumericalError for a zero state.
double transfer_ratio(const Trajectory& traj, std::string_view site);
double transfer_ratio(const StateVector& psi, std::size_t site);

/// arg(psi_i) - arg(psi_j) wrapped to (-pi, pi] at the stored sample nearest t.
/// Throws NumericalError when either amplitude is below 1e-6 of the largest one.
double relative_phase(const Trajectory& traj, std::string_view site_i, std::string_view site_j,
                      double t);
double relative_phase(const StateVector& psi, std::size_t i, std::size_t j);

/// Re[psi_site(t) exp(-i 2 pi carrier t)] on the trajectory grid.
std::vector<double> render_waveform(const Trajectory& traj, std::string_view site,
                                    double carrier_hz);

/// Time between t = 0 and the first return of the relative energy
/// |psi_site|^2 / |psi|^2 to a local maximum (parabolic refinement on the stored
/// grid); uniform loss does not shift it. Empty if no return is seen.
std::optional<double> energy_return_period(const Trajectory& traj, std::string_view site);

/// Header: time_s, re_<site>, im_<site>, ...
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

} // namespace hlab
