#include "holonomylab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "holonomylab/error.hpp"

namespace hlab {

namespace {

using cd = std::complex<double>;
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr cd minus_i{0.0, -1.0};

/// Network edges bound to the path axes that drive them.
class Schedule {
public:
    Schedule(const CavityNetwork& network, const ControlPath& path, Frame frame)
        : path_(path), sites_(network.edge_sites()) {
        for (std::size_t axis : bind_axes(network, path)) {
            axis_.push_back(static_cast<Eigen::Index>(axis));
        }
        const double f_ref = frame == Frame::rotating ? network.reference_frequency_hz() : 0.0;
        for (const auto& p : network.params()) {
            diag_.emplace_back(two_pi * (p.f0_hz - f_ref), -two_pi * p.net_decay_hz());
        }
        coupling_.resize(sites_.size());
    }

    // out = -i H(t) psi
    void apply(double t, const StateVector& psi, StateVector& out) {
        if (!path_.legs().empty()) {
            const Eigen::VectorXd h = path_.hoppings_at(t);
            for (std::size_t e = 0; e < sites_.size(); ++e) coupling_[e] = two_pi * h(axis_[e]);
        }
        for (Eigen::Index i = 0; i < psi.size(); ++i) out(i) = diag_[static_cast<std::size_t>(i)] * psi(i);
        for (std::size_t e = 0; e < sites_.size(); ++e) {
            const auto i = static_cast<Eigen::Index>(sites_[e].first);
            const auto j = static_cast<Eigen::Index>(sites_[e].second);
            out(i) += coupling_[e] * psi(j);
            out(j) += coupling_[e] * psi(i);
        }
        out *= minus_i;
    }

private:
    const ControlPath& path_;
    const std::vector<std::pair<std::size_t, std::size_t>>& sites_;
    std::vector<Eigen::Index> axis_;
    std::vector<cd> diag_;
    std::vector<double> coupling_;
};

void check_finite(const StateVector& psi, double t) {
    if (!psi.allFinite()) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "numerical blow-up: non-finite state at t = %.6g s", t);
        throw NumericalError(buf);
    }
}

std::string describe(const ControlPath& path) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu legs, kappa_max %.6g Hz, t_m %.6g s", path.legs().size(),
                  path.kappa_max_hz(), path.total_duration());
    return buf;
}

double wrap_phase(double a) {
    a = std::remainder(a, 2.0 * std::numbers::pi);
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

} // namespace

StateVector site_state(const CavityNetwork& network, std::string_view label) {
    StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(network.size()));
    psi(static_cast<Eigen::Index>(network.index_of(label))) = 1.0;
    return psi;
}

std::size_t Trajectory::site(std::string_view label) const {
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i] == label) return i;
    }
    throw ConfigError("unknown site label \"" + std::string(label) + "\"");
}

Trajectory evolve(const CavityNetwork& network, const ControlPath& path, const StateVector& psi0,
                  const EvolveOptions& options) {
    if (!(options.dt_s > 0.0) || !std::isfinite(options.dt_s)) {
        throw ConfigError("dt must be positive");
    }
    if (!(options.sample_interval_s > 0.0)) throw ConfigError("sample interval must be positive");
    if (static_cast<std::size_t>(psi0.size()) != network.size()) {
        throw ConfigError("initial state dimension does not match the network");
    }
    if (!psi0.allFinite()) throw ConfigError("initial state has non-finite entries");
    if (path.kappa_max_hz() > 0.0 && options.dt_s > 1.0 / (50.0 * path.kappa_max_hz())) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "dt = %.3g s is too coarse for kappa_max = %.3g Hz; use dt <= %.3g s",
                      options.dt_s, path.kappa_max_hz(), 1.0 / (50.0 * path.kappa_max_hz()));
        throw ConfigError(buf);
    }
    if (options.frame == Frame::lab) {
        double f_max = 0.0;
        for (const auto& p : network.params()) f_max = std::max(f_max, p.f0_hz);
        if (options.dt_s > 1.0 / (9.0 * f_max)) {
            throw ConfigError("dt too coarse for the lab-frame carrier; use dt <= 1/(9 f0)");
        }
    }

    Schedule schedule(network, path, options.frame);

    Trajectory traj;
    traj.basis = network.labels();
    traj.frame = options.frame;
    traj.schedule_id = describe(path);

    const double total = path.total_duration();
    if (total == 0.0) {
        traj.times = {0.0};
        traj.states = {psi0};
        traj.step_s = 0.0;
        for (double c : options.capture_times) {
            traj.capture_times.push_back(0.0);
            traj.captured.push_back(psi0);
            (void)c;
        }
        return traj;
    }

    const auto steps = std::max<long>(1, static_cast<long>(std::ceil(total / options.dt_s - 1e-9)));
    const double h = total / static_cast<double>(steps);
    traj.step_s = h;
    long stride = std::max<long>(1, std::lround(options.sample_interval_s / h));
    stride = std::min(stride, steps);
    while (steps % stride != 0) --stride;

    std::vector<long> capture_step;
    for (double c : options.capture_times) {
        capture_step.push_back(std::clamp<long>(std::lround(c / h), 0, steps));
    }
    traj.captured.resize(capture_step.size());
    traj.capture_times.resize(capture_step.size());
    auto capture = [&](long step, const StateVector& psi) {
        for (std::size_t c = 0; c < capture_step.size(); ++c) {
            if (capture_step[c] == step) {
                traj.capture_times[c] = static_cast<double>(step) * h;
                traj.captured[c] = psi;
            }
        }
    };

    const auto n = psi0.size();
    StateVector psi = psi0;
    StateVector k1(n), k2(n), k3(n), k4(n), tmp(n);
    traj.times.reserve(static_cast<std::size_t>(steps / stride + 1));
    traj.states.reserve(static_cast<std::size_t>(steps / stride + 1));
    traj.times.push_back(0.0);
    traj.states.push_back(psi);
    capture(0, psi);

    for (long s = 0; s < steps; ++s) {
        const double t = static_cast<double>(s) * h;
        schedule.apply(t, psi, k1);
        tmp = psi + (0.5 * h) * k1;
        schedule.apply(t + 0.5 * h, tmp, k2);
        tmp = psi + (0.5 * h) * k2;
        schedule.apply(t + 0.5 * h, tmp, k3);
        tmp = psi + h * k3;
        schedule.apply(t + h, tmp, k4);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const long done = s + 1;
        if (done % stride == 0) {
            const double now = done == steps ? total : static_cast<double>(done) * h;
            check_finite(psi, now);
            traj.times.push_back(now);
            traj.states.push_back(psi);
        } else if (done % 1024 == 0) {
            check_finite(psi, static_cast<double>(done) * h);
        }
        capture(done, psi);
    }
    return traj;
}

DriveResult prepare_by_drive(const CavityNetwork& network, const DriveSpec& drive, double dt_s,
                             Frame frame) {
    const auto site = static_cast<Eigen::Index>(network.index_of(drive.site));
    if (drive.amplitude == 0.0 || !std::isfinite(drive.amplitude)) {
        throw ConfigError("drive amplitude must be nonzero");
    }
    if (!(drive.duration_s > 0.0)) throw ConfigError("drive duration must be positive");
    if (!(drive.frequency_hz > 0.0)) throw ConfigError("drive frequency must be positive");
    if (!(dt_s > 0.0)) throw ConfigError("dt must be positive");

    const double f_ref = frame == Frame::rotating ? network.reference_frequency_hz() : 0.0;
    std::vector<cd> diag;
    for (const auto& p : network.params()) {
        diag.emplace_back(two_pi * (p.f0_hz - f_ref), -two_pi * p.net_decay_hz());
    }
    const double w = two_pi * (drive.frequency_hz - f_ref);
    if (dt_s > 1.0 / (20.0 * std::max(1.0, std::abs(w) / two_pi))) {
        throw ConfigError("dt too coarse for the drive detuning");
    }

    const auto n = static_cast<Eigen::Index>(network.size());
    auto rhs = [&](double t, const StateVector& psi, StateVector& out) {
        for (Eigen::Index i = 0; i < n; ++i) out(i) = diag[static_cast<std::size_t>(i)] * psi(i);
        out(site) += drive.amplitude * std::exp(cd(0.0, -w * t));
        out *= minus_i;
    };

    const auto steps = std::max<long>(1, static_cast<long>(std::ceil(drive.duration_s / dt_s - 1e-9)));
    const double h = drive.duration_s / static_cast<double>(steps);
    StateVector psi = StateVector::Zero(n);
    StateVector k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (long s = 0; s < steps; ++s) {
        const double t = static_cast<double>(s) * h;
        rhs(t, psi, k1);
        tmp = psi + (0.5 * h) * k1;
        rhs(t + 0.5 * h, tmp, k2);
        tmp = psi + (0.5 * h) * k2;
        rhs(t + 0.5 * h, tmp, k3);
        tmp = psi + h * k3;
        rhs(t + h, tmp, k4);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    check_finite(psi, drive.duration_s);
    const double norm = psi.norm();
    if (norm == 0.0) throw NumericalError("drive left the network unexcited");
    return {psi / norm, psi};
}

Eigen::MatrixXd site_energies(const Trajectory& traj) {
    const auto rows = static_cast<Eigen::Index>(traj.states.size());
    const auto cols = static_cast<Eigen::Index>(traj.basis.size());
    Eigen::MatrixXd e(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        e.row(r) = traj.states[static_cast<std::size_t>(r)].cwiseAbs2().transpose();
    }
    return e;
}

double transfer_ratio(const StateVector& psi, std::size_t site) {
    const double total = psi.squaredNorm();
    if (!(total > 0.0)) throw NumericalError("transfer ratio undefined for a zero state");
    return std::norm(psi(static_cast<Eigen::Index>(site))) / total;
}

double transfer_ratio(const Trajectory& traj, std::string_view site) {
    if (traj.states.empty()) throw NumericalError("empty trajectory");
    return transfer_ratio(traj.final_state(), traj.site(site));
}

double relative_phase(const StateVector& psi, std::size_t i, std::size_t j) {
    const double largest = psi.cwiseAbs().maxCoeff();
    const cd a = psi(static_cast<Eigen::Index>(i));
    const cd b = psi(static_cast<Eigen::Index>(j));
    if (!(largest > 0.0) || std::abs(a) <= 1e-6 * largest || std::abs(b) <= 1e-6 * largest) {
        throw NumericalError("relative phase undefined: amplitude too small");
    }
    return wrap_phase(std::arg(a) - std::arg(b));
}

double relative_phase(const Trajectory& traj, std::string_view site_i, std::string_view site_j,
                      double t) {
    if (traj.times.empty()) throw NumericalError("empty trajectory");
    auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t);
    std::size_t k = static_cast<std::size_t>(it - traj.times.begin());
    if (k == traj.times.size()) {
        k = traj.times.size() - 1;
    } else if (k > 0 && std::abs(traj.times[k - 1] - t) < std::abs(traj.times[k] - t)) {
        --k;
    }
    return relative_phase(traj.states[k], traj.site(site_i), traj.site(site_j));
}

std::vector<double> render_waveform(const Trajectory& traj, std::string_view site,
                                    double carrier_hz) {
    if (!(carrier_hz > 0.0)) throw ConfigError("carrier frequency must be positive");
    const auto i = static_cast<Eigen::Index>(traj.site(site));
    std::vector<double> out;
    out.reserve(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const cd carrier = std::exp(cd(0.0, -two_pi * carrier_hz * traj.times[k]));
        out.push_back((traj.states[k](i) * carrier).real());
    }
    return out;
}

std::optional<double> energy_return_period(const Trajectory& traj, std::string_view site) {
    const auto i = static_cast<Eigen::Index>(traj.site(site));
    const std::size_t n = traj.states.size();
    if (n < 3) return std::nullopt;
    std::vector<double> e(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double total = traj.states[k].squaredNorm();
        e[k] = total > 0.0 ? std::norm(traj.states[k](i)) / total : 0.0;
    }
    std::size_t k = 1;
    while (k < n && e[k] <= e[k - 1]) ++k; // descend to the first minimum
    for (; k + 1 < n; ++k) {
        if (e[k] >= e[k - 1] && e[k] > e[k + 1]) {
            const double denom = e[k - 1] - 2.0 * e[k] + e[k + 1];
            const double shift = denom != 0.0 ? 0.5 * (e[k - 1] - e[k + 1]) / denom : 0.0;
            const double dt = traj.times[k + 1] - traj.times[k];
            return traj.times[k] + shift * dt;
        }
    }
    return std::nullopt;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "time_s";
    for (const auto& s : traj.basis) out << ",re_" << s << ",im_" << s;
    out << '\n';
    char buf[64];
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.9g", traj.times[k]);
        out << buf;
        for (Eigen::Index i = 0; i < traj.states[k].size(); ++i) {
            std::snprintf(buf, sizeof buf, ",%.12e,%.12e", traj.states[k](i).real(),
                          traj.states[k](i).imag());
            out << buf;
        }
        out << '\n';
    }
}

} // namespace hlab
