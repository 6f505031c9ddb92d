#include "holonomylab/gates.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "holonomylab/error.hpp"

namespace hlab::gates {

Eigen::Matrix2d rotation(double omega) {
    const double c = std::cos(omega);
    const double s = std::sin(omega);
    Eigen::Matrix2d u;
    u << c, -s, s, c;
    return u;
}

Eigen::Matrix2d y() {
    Eigen::Matrix2d u;
    u << 0, -1, 1, 0;
    return u;
}

Eigen::Matrix2d z() {
    Eigen::Matrix2d u;
    u << 1, 0, 0, -1;
    return u;
}

Eigen::Matrix2d hadamard() {
    const double r = std::numbers::sqrt2 / 2.0;
    Eigen::Matrix2d u;
    u << r, r, r, -r;
    return u;
}

Eigen::Matrix3d g1() {
    Eigen::Matrix3d u = Eigen::Matrix3d::Identity();
    u.topLeftCorner<2, 2>() = y();
    return u;
}

Eigen::Matrix3d g2() {
    Eigen::Matrix3d u = Eigen::Matrix3d::Identity();
    u.bottomRightCorner<2, 2>() = y();
    return u;
}

Eigen::MatrixXd by_name(std::string_view name) {
    if (name == "Y") return y();
    if (name == "Z") return z();
    if (name == "H") return hadamard();
    if (name == "G1") return g1();
    if (name == "G2") return g2();
    throw ConfigError("unknown gate \"" + std::string(name) + "\"");
}

} // namespace hlab::gates
