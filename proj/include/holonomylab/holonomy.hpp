#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "holonomylab/control_path.hpp"
#include "holonomylab/dynamics.hpp"
#include "holonomylab/network.hpp"

namespace hlab {

/// Orthonormal basis (columns) of the null space of a hopping matrix.
struct ZeroModeFrame {
    Eigen::MatrixXcd basis;
    double parameter = 0.0;

    Eigen::Index dimension() const { return basis.cols(); }
};

/// Singular values below 1e-9 * sigma_max count as zero. Throws NumericalError
/// (rank ambiguity) when a singular value lies within a factor of 10 of that
/// threshold.
ZeroModeFrame zero_mode_frame(const Eigen::MatrixXd& hopping, double parameter = 0.0);

enum class HolonomyMethod { adiabatic, dynamic };

struct HolonomyResult {
    Eigen::MatrixXd matrix;
    /// Complex projections with the global phase removed; matrix is its real part.
    Eigen::MatrixXcd amplitudes;
    double orthogonality_defect = 0.0; // ||M^T M - I||_F
    double determinant = 0.0;
    std::optional<double> fidelity;
    double leakage = 0.0;
    double global_phase_rad = 0.0;
    HolonomyMethod method = HolonomyMethod::adiabatic;

    nlohmann::json to_json() const;
};

/// Site unit vectors as columns, e.g. {"A", "B"}.
Eigen::MatrixXcd site_basis(const CavityNetwork& network, const std::vector<std::string>& sites);

/// Parallel-transports `initial` (columns spanning the zero-mode space at the
/// path start) along the path. Consecutive frames are aligned by the unitary
/// polar factor of their overlap. Steps are shared between legs by arc angle.
Eigen::MatrixXcd transport_frame(const CavityNetwork& network, const ControlPath& path,
                                 const Eigen::MatrixXcd& initial, int n_steps);

/// Wilczek-Zee holonomy expressed in `reference`, which must span the zero-mode
/// space at both ends of the path.
HolonomyResult adiabatic_holonomy(const CavityNetwork& network, const ControlPath& path,
                                  const Eigen::MatrixXcd& reference, int n_steps = 2000);

/// Changes ||M(2n) - M(n)||_F and ||M(4n) - M(2n)||_F.
struct ConvergenceEstimate {
    double coarse_change = 0.0;
    double fine_change = 0.0;
};
ConvergenceEstimate holonomy_convergence(const CavityNetwork& network, const ControlPath& path,
                                         const Eigen::MatrixXcd& reference, int n_steps);

struct DynamicOptions {
    EvolveOptions evolve;
    /// Checked at every leg boundary, final point included.
    double max_leakage = 0.1;
};

/// Gate realized by full dynamics: every reference vector is evolved, the
/// uniform decay divided out, and the result projected on `reference`. The
/// matrix is made real by removing a global phase, which is reported.
/// Throws AdiabaticityError when the leakage out of the instantaneous
/// zero-mode space at any leg boundary exceeds max_leakage.
HolonomyResult dynamic_holonomy(const CavityNetwork& network, const ControlPath& path,
                                const Eigen::MatrixXcd& reference, const DynamicOptions& options = {});

/// |Tr(target^T extracted)| / n.
double gate_fidelity(const Eigen::MatrixXd& extracted, const Eigen::MatrixXd& target);

} // namespace hlab
