#include "holonomylab/holonomy.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <future>
#include <numeric>

#include "holonomylab/error.hpp"

namespace hlab {

namespace {

using cd = std::complex<double>;

constexpr double rank_threshold = 1e-9;
constexpr double subspace_tol = 1e-9;

Eigen::MatrixXcd polar_unitary(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues().size() > 0 && svd.singularValues().minCoeff() < 1e-6) {
        throw NumericalError("consecutive zero-mode frames nearly orthogonal; increase n_steps");
    }
    return svd.matrixU() * svd.matrixV().adjoint();
}

ZeroModeFrame frame_at(const CavityNetwork& network, const ControlPath& path,
                       const std::vector<std::size_t>& binding, double t) {
    const auto h = edge_hoppings(path, binding, t);
    return zero_mode_frame(hopping_matrix(network, h), t);
}

double subspace_residual(const Eigen::MatrixXcd& frame, const Eigen::MatrixXcd& vectors) {
    return (vectors - frame * (frame.adjoint() * vectors)).norm();
}

void require_reference(const Eigen::MatrixXcd& reference, const CavityNetwork& network) {
    if (static_cast<std::size_t>(reference.rows()) != network.size() || reference.cols() == 0) {
        throw ConfigError("reference basis has the wrong shape");
    }
    const auto k = reference.cols();
    if ((reference.adjoint() * reference - Eigen::MatrixXcd::Identity(k, k)).norm() > 1e-10) {
        throw ConfigError("reference basis must be orthonormal");
    }
}

void finish(HolonomyResult& r) {
    const auto k = r.matrix.cols();
    r.orthogonality_defect =
        (r.matrix.transpose() * r.matrix - Eigen::MatrixXd::Identity(k, k)).norm();
    r.determinant = r.matrix.determinant();
}

} // namespace

ZeroModeFrame zero_mode_frame(const Eigen::MatrixXd& hopping, double parameter) {
    if (hopping.rows() != hopping.cols() || hopping.rows() == 0) {
        throw ConfigError("hopping matrix must be square and nonempty");
    }
    const auto n = hopping.rows();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(hopping, Eigen::ComputeFullV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double top = sigma(0);
    ZeroModeFrame frame;
    frame.parameter = parameter;
    if (top == 0.0) {
        frame.basis = Eigen::MatrixXcd::Identity(n, n);
        return frame;
    }
    const double cut = rank_threshold * top;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (sigma(i) > cut / 10.0 && sigma(i) < cut * 10.0) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "rank ambiguity: singular value %.3e near threshold %.3e", sigma(i), cut);
            throw NumericalError(buf);
        }
        if (sigma(i) >= cut) ++rank;
    }
    frame.basis = svd.matrixV().rightCols(n - rank).cast<cd>();
    return frame;
}

Eigen::MatrixXcd site_basis(const CavityNetwork& network, const std::vector<std::string>& sites) {
    Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(network.size()),
                                                    static_cast<Eigen::Index>(sites.size()));
    for (std::size_t k = 0; k < sites.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(network.index_of(sites[k]));
        for (std::size_t j = 0; j < k; ++j) {
            if (sites[j] == sites[k]) throw ConfigError("repeated basis site " + sites[k]);
        }
        basis(i, static_cast<Eigen::Index>(k)) = 1.0;
    }
    return basis;
}

Eigen::MatrixXcd transport_frame(const CavityNetwork& network, const ControlPath& path,
                                 const Eigen::MatrixXcd& initial, int n_steps) {
    require_reference(initial, network);
    if (path.legs().empty()) return initial;
    const auto binding = bind_axes(network, path);

    const ZeroModeFrame first = frame_at(network, path, binding, 0.0);
    if (first.dimension() != initial.cols() || subspace_residual(first.basis, initial) > subspace_tol) {
        throw ConfigError("reference basis does not span the zero-mode space at the path start");
    }

    double total_angle = 0.0;
    for (const auto& leg : path.legs()) total_angle += leg.angle();

    Eigen::MatrixXcd carried = initial;
    double leg_start = 0.0;
    for (const auto& leg : path.legs()) {
        if (leg.angle() > 0.0) {
            const int m = std::max(1, static_cast<int>(std::ceil(n_steps * leg.angle() / total_angle)));
            for (int s = 1; s <= m; ++s) {
                const double t = leg_start + leg.duration() * static_cast<double>(s) / m;
                const ZeroModeFrame f = frame_at(network, path, binding, s == m ? leg_start + leg.duration() : t);
                if (f.dimension() != initial.cols()) {
                    char buf[128];
                    std::snprintf(buf, sizeof buf,
                                  "degeneracy break: zero-mode dimension %ld at t = %.6g s (expected %ld)",
                                  static_cast<long>(f.dimension()), t, static_cast<long>(initial.cols()));
                    throw NumericalError(buf);
                }
                carried = f.basis * polar_unitary(f.basis.adjoint() * carried);
            }
        }
        leg_start += leg.duration();
    }
    return carried;
}

HolonomyResult adiabatic_holonomy(const CavityNetwork& network, const ControlPath& path,
                                  const Eigen::MatrixXcd& reference, int n_steps) {
    if (n_steps < 100) throw ConfigError("adiabatic holonomy needs n_steps >= 100");
    const Eigen::MatrixXcd carried = transport_frame(network, path, reference, n_steps);
    if (subspace_residual(reference, carried) > subspace_tol) {
        throw ConfigError("path does not return to the starting zero-mode subspace");
    }
    const Eigen::MatrixXcd m = reference.adjoint() * carried;
    HolonomyResult r;
    r.method = HolonomyMethod::adiabatic;
    r.matrix = m.real();
    r.amplitudes = m;
    finish(r);
    return r;
}

ConvergenceEstimate holonomy_convergence(const CavityNetwork& network, const ControlPath& path,
                                         const Eigen::MatrixXcd& reference, int n_steps) {
    const auto m1 = adiabatic_holonomy(network, path, reference, n_steps).matrix;
    const auto m2 = adiabatic_holonomy(network, path, reference, 2 * n_steps).matrix;
    const auto m4 = adiabatic_holonomy(network, path, reference, 4 * n_steps).matrix;
    return {(m2 - m1).norm(), (m4 - m2).norm()};
}

HolonomyResult dynamic_holonomy(const CavityNetwork& network, const ControlPath& path,
                                const Eigen::MatrixXcd& reference, const DynamicOptions& options) {
    require_reference(reference, network);
    const auto binding = bind_axes(network, path);
    const double total = path.total_duration();

    // Uniform decay is divided out; non-uniform loss has no common factor.
    std::vector<double> zero(network.edges().size(), 0.0);
    const double decay_hz =
        factor_uniform_loss(assemble_hamiltonian(network, zero, options.evolve.frame)).decay_hz;
    const double undo_decay = std::exp(2.0 * std::numbers::pi * decay_hz * total);

    if (!path.legs().empty()) {
        const ZeroModeFrame start = frame_at(network, path, binding, 0.0);
        const ZeroModeFrame end = frame_at(network, path, binding, total);
        if (subspace_residual(start.basis, reference) > subspace_tol) {
            throw ConfigError("reference basis does not span the zero-mode space at the path start");
        }
        if (subspace_residual(end.basis, reference) > subspace_tol) {
            throw ConfigError("path does not return to the starting zero-mode subspace");
        }
    }

    EvolveOptions evolve_opts = options.evolve;
    evolve_opts.capture_times = path.leg_end_times();

    std::vector<ZeroModeFrame> checkpoint_frames;
    for (double t : evolve_opts.capture_times) checkpoint_frames.push_back(frame_at(network, path, binding, t));

    struct Column {
        Eigen::VectorXcd psi;
        double leakage = 0.0;
    };
    auto run = [&](Eigen::Index j) {
        const Trajectory traj = evolve(network, path, reference.col(j), evolve_opts);
        Column c;
        c.psi = traj.final_state() * undo_decay;
        for (std::size_t k = 0; k < traj.captured.size(); ++k) {
            const auto& psi = traj.captured[k];
            const double norm2 = psi.squaredNorm();
            const double kept = (checkpoint_frames[k].basis.adjoint() * psi).squaredNorm();
            c.leakage = std::max(c.leakage, norm2 > 0.0 ? 1.0 - kept / norm2 : 1.0);
        }
        return c;
    };

    std::vector<std::future<Column>> jobs;
    for (Eigen::Index j = 0; j < reference.cols(); ++j) {
        jobs.push_back(std::async(std::launch::async, run, j));
    }
    const auto k = reference.cols();
    Eigen::MatrixXcd m(k, k);
    double leakage = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
        const Column c = jobs[static_cast<std::size_t>(j)].get();
        m.col(j) = reference.adjoint() * c.psi;
        leakage = std::max(leakage, c.leakage);
    }
    if (leakage > options.max_leakage) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "adiabaticity failure: leakage %.3f out of the zero-mode space (limit %.3f)",
                      leakage, options.max_leakage);
        throw AdiabaticityError(buf, leakage);
    }

    // Global phase that makes the matrix closest to real.
    const cd sum_sq = m.array().square().sum();
    const double phase = 0.5 * std::arg(sum_sq);

    HolonomyResult r;
    r.method = HolonomyMethod::dynamic;
    r.amplitudes = m * std::exp(cd(0.0, -phase));
    r.matrix = r.amplitudes.real();
    r.global_phase_rad = phase;
    r.leakage = leakage;
    finish(r);
    return r;
}

double gate_fidelity(const Eigen::MatrixXd& extracted, const Eigen::MatrixXd& target) {
    if (extracted.rows() != target.rows() || extracted.cols() != target.cols() ||
        extracted.rows() != extracted.cols()) {
        throw ConfigError("gate fidelity: dimension mismatch");
    }
    return std::abs((target.transpose() * extracted).trace()) / static_cast<double>(target.rows());
}

nlohmann::json HolonomyResult::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) row.push_back(matrix(i, j));
        rows.push_back(row);
    }
    nlohmann::json out = {{"matrix", rows},
                          {"defect", orthogonality_defect},
                          {"determinant", determinant},
                          {"leakage", leakage},
                          {"method", method == HolonomyMethod::adiabatic ? "adiabatic-oracle" : "dynamic"},
                          {"global_phase_rad", global_phase_rad}};
    out["fidelity"] = fidelity ? nlohmann::json(*fidelity) : nlohmann::json(nullptr);
    return out;
}

} // namespace hlab
