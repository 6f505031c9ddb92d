#pragma once

#include <string_view>

#include <Eigen/Dense>

namespace hlab::gates {

// Real target gates. States are columns and a gate acts as psi' = U psi.

/// [[cos, -sin], [sin, cos]]
Eigen::Matrix2d rotation(double omega);
Eigen::Matrix2d y();        // U(pi/2)
Eigen::Matrix2d z();        // diag(1, -1): isolated mode first, transported mode second
Eigen::Matrix2d hadamard(); // U(pi/4) * Z
Eigen::Matrix3d g1();       // blockdiag(Y, 1)
Eigen::Matrix3d g2();       // blockdiag(1, Y)

/// "Y", "Z", "H", "G1", "G2". Throws ConfigError otherwise.
Eigen::MatrixXd by_name(std::string_view name);

} // namespace hlab::gates
