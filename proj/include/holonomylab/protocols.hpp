#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "holonomylab/control_path.hpp"
#include "holonomylab/network.hpp"

namespace hlab {

/// A gate demonstration: network, closed control path, the zero-mode basis the
/// gate is expressed in, and the target matrix.
struct GateProtocol {
    std::string name;
    CavityNetwork network;
    ControlPath path;
    std::vector<std::string> basis;
    Eigen::MatrixXd target;
};

/// Half circle on the four-site star (S -> B -> -S, flips B) followed by the
/// gauge-flipped lune -S -> -A -> -(A+B)/sqrt2 -> -S enclosing pi/4:
/// U(pi/4) * Z on (A, B).
ControlPath hadamard_path(double kappa_max_hz, LegTiming timing);

/// "Y"  : octant on the four-site star, basis (A, B)
/// "Z"  : half circle on A-X-S with B isolated, basis (B, A)
/// "H"  : hadamard_path, basis (A, B)
/// "G2G1", "G1G2" or any braid word: five-site star, basis (A, B, C)
GateProtocol make_gate_protocol(std::string_view gate, double kappa_max_hz, LegTiming timing,
                                const CavityParams& cavity);

} // namespace hlab
