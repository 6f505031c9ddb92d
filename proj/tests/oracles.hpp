#pragma once
// Closed-form references used by the tests. Nothing here calls into the library.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

/// Two equal cavities, constant hopping kappa, uniform decay gamma, rotating
/// frame, psi(0) = |A>.
inline Eigen::Vector2cd rabi(double kappa_hz, double gamma_hz, double t) {
    const double damp = std::exp(-2.0 * pi * gamma_hz * t);
    const double w = 2.0 * pi * kappa_hz * t;
    return {damp * std::cos(w), cd(0.0, -damp * std::sin(w))};
}

/// Same, lab frame at resonance f0.
inline Eigen::Vector2cd rabi_lab(double f0_hz, double kappa_hz, double t) {
    const cd carrier = std::exp(cd(0.0, -2.0 * pi * f0_hz * t));
    const double w = 2.0 * pi * kappa_hz * t;
    return {carrier * std::cos(w), carrier * cd(0.0, -std::sin(w))};
}

/// One constant-rate great-circle leg of angle phi lasting T on a star graph:
/// the transported dark state keeps amplitude a, the rest goes to the bright
/// and hub modes. x = 2 pi kappa T.
inline double dark_amplitude(double kappa_hz, double duration_s, double phi) {
    const double x = 2.0 * pi * kappa_hz * duration_s;
    const double r2 = x * x + phi * phi;
    return (x * x + phi * phi * std::cos(std::sqrt(r2))) / r2;
}

/// Signed solid angle by the line integral (1 - cos theta) dphi around a pole
/// far from the curve, negated so that counter-clockwise seen from the centre
/// is positive. Result in (-2 pi, 2 pi].
inline double solid_angle_line_integral(const std::vector<Eigen::Vector3d>& curve,
                                        const Eigen::Vector3d& pole_dir) {
    const Eigen::Vector3d p = pole_dir.normalized();
    Eigen::Vector3d e1 = p.unitOrthogonal();
    Eigen::Vector3d e2 = p.cross(e1);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
        const Eigen::Vector3d a = curve[k].normalized(), b = curve[k + 1].normalized();
        const double phi_a = std::atan2(a.dot(e2), a.dot(e1));
        const double phi_b = std::atan2(b.dot(e2), b.dot(e1));
        double dphi = phi_b - phi_a;
        while (dphi > pi) dphi -= 2.0 * pi;
        while (dphi < -pi) dphi += 2.0 * pi;
        const double cos_mid = 0.5 * (a.dot(p) + b.dot(p));
        total += (1.0 - cos_mid) * dphi;
    }
    double omega = -total;
    omega = std::remainder(omega, 4.0 * pi);
    if (omega > 2.0 * pi) omega -= 4.0 * pi;
    if (omega <= -2.0 * pi) omega += 4.0 * pi;
    return omega;
}

/// Projector onto the eigenvectors of a symmetric matrix with |lambda| < tol.
inline Eigen::MatrixXd null_projector(const Eigen::MatrixXd& h, double tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(h.rows(), h.cols());
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
        if (std::abs(es.eigenvalues()(k)) < tol) p += es.eigenvectors().col(k) * es.eigenvectors().col(k).transpose();
    }
    return p;
}

/// Single damped mode driven from rest: i dpsi/dt = lambda psi + amp e^{-i w t}.
inline cd driven_mode(cd lambda, double w, double amp, double t) {
    const cd i(0.0, 1.0);
    return -i * amp * (std::exp(-i * w * t) - std::exp(-i * lambda * t)) / (i * (lambda - w));
}

inline Eigen::Matrix2d rotation(double omega) {
    Eigen::Matrix2d u;
    u << std::cos(omega), -std::sin(omega), std::sin(omega), std::cos(omega);
    return u;
}

/// Least-squares slope of log(err) against log(h).
inline double loglog_slope(const std::vector<double>& h, const std::vector<double>& err) {
    const auto n = static_cast<double>(h.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        const double x = std::log(h[k]), y = std::log(err[k]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace oracle
