#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "holonomylab/network.hpp"

namespace hlab {

/// Unit vector in hopping space; component k belongs to ControlPath::axes()[k].
using Direction = Eigen::VectorXd;

/// One great-circle arc traversed at constant angular velocity:
/// d(t) = cos(theta) start + sin(theta) tangent, theta = angle * t / duration.
/// A zero angle is a hold at a fixed direction.
class PathLeg {
public:
    static PathLeg arc(Direction start, Direction tangent, double angle, double duration_s);
    /// Shorter great-circle arc between two non-antipodal directions.
    static PathLeg geodesic(const Direction& start, const Direction& end, double duration_s);
    static PathLeg hold(Direction direction, double duration_s);

    const Direction& start() const { return start_; }
    const Direction& end() const { return end_; }
    const Direction& tangent() const { return tangent_; }
    double angle() const { return angle_; }
    double duration() const { return duration_; }

    Direction direction_at(double local_t) const;

    PathLeg reversed() const;
    PathLeg negated() const;
    PathLeg with_duration(double duration_s) const;

private:
    PathLeg(Direction start, Direction tangent, Direction end, double angle, double duration);

    Direction start_;
    Direction tangent_;
    Direction end_;
    double angle_ = 0.0;
    double duration_ = 0.0;
};

/// Curve on the unit sphere of hopping space scaled by kappa_max.
class ControlPath {
public:
    ControlPath(std::vector<Edge> axes, std::vector<PathLeg> legs, double kappa_max_hz);

    const std::vector<Edge>& axes() const { return axes_; }
    const std::vector<PathLeg>& legs() const { return legs_; }
    double kappa_max_hz() const { return kappa_max_hz_; }
    std::size_t dimension() const { return axes_.size(); }

    double total_duration() const;
    /// First start equals last end (1e-12). An empty path is closed.
    bool closed() const;
    /// Cumulative end time of every leg.
    std::vector<double> leg_end_times() const;

    Direction direction_at(double t) const;
    /// kappa_max * direction_at(t), in Hz, ordered like axes().
    Eigen::VectorXd hoppings_at(double t) const;

    ControlPath reversed() const;
    /// Image under the gauge flip of the hub site (all hoppings change sign).
    ControlPath negated() const;
    /// Leg durations rescaled so that the total equals `total_s`.
    ControlPath with_total_duration(double total_s) const;
    ControlPath with_kappa_max(double kappa_max_hz) const;
    /// Re-expresses the path over a larger axis set; unused axes stay at zero.
    ControlPath embedded(const std::vector<Edge>& axes) const;

private:
    std::vector<Edge> axes_;
    std::vector<PathLeg> legs_;
    double kappa_max_hz_;
    std::vector<double> leg_start_;
};

/// Leg duration policy for multi-leg loops.
class LegTiming {
public:
    static LegTiming fixed(double duration_s);
    /// Each arc of angle phi lasts sqrt((2 pi m)^2 - phi^2) / (2 pi kappa_max): the
    /// bright/hub oscillation then completes m full cycles and hands the
    /// transported zero mode back without leakage.
    static LegTiming resonant(int order = 1);

    double duration_for(double arc_angle, double kappa_max_hz) const;

private:
    LegTiming(bool resonant, double duration_s, int order)
        : resonant_(resonant), duration_(duration_s), order_(order) {}

    bool resonant_;
    double duration_;
    int order_;
};

double resonant_leg_duration(double arc_angle, double kappa_max_hz, int order = 1);

ControlPath concatenate(const ControlPath& first, const ControlPath& second);

/// Constant hopping vector `kappa_hz` held for `duration_s`.
ControlPath constant_hopping(std::vector<Edge> axes, const Eigen::VectorXd& kappa_hz,
                             double duration_s);

/// kappa_from = kappa_max cos(pi t / 2 t_m), kappa_to = kappa_max sin(pi t / 2 t_m).
ControlPath quarter_circle(const Edge& edge_from, const Edge& edge_to, double kappa_max_hz,
                           double duration_s);

/// Direction (sin theta, cos theta) over (axis_1, axis_2), theta: 0 -> pi; axis_2
/// starts at +kappa_max and ends at -kappa_max.
ControlPath half_circle(const Edge& axis_1, const Edge& axis_2, double kappa_max_hz,
                        double duration_s);

/// Closed loop (1,0,0) -> (0,0,1) -> (0,1,0) -> (1,0,0) over the three axes.
/// Encloses solid angle +pi/2; in the zero-mode basis (axis_3, axis_2) of a star
/// graph its holonomy is Y.
ControlPath octant_loop(const std::array<Edge, 3>& axes, double kappa_max_hz, LegTiming timing);

/// Geodesic polygon v0 -> v1 -> ... -> v_{k-1} -> v0. Vertices are normalized.
ControlPath geodesic_loop(std::vector<Edge> axes, const std::vector<Direction>& vertices,
                          double kappa_max_hz, LegTiming timing);

/// Signed solid angle enclosed by a closed path in 3-dimensional hopping space.
/// Positive when the loop runs counter-clockwise seen from the sphere centre
/// (the octant loop gives +pi/2).
double solid_angle(const ControlPath& path);

/// For each network edge, the index of the path axis that drives it. Throws
/// ConfigError if an edge is not driven or an axis is not a network edge.
std::vector<std::size_t> bind_axes(const CavityNetwork& network, const ControlPath& path);

/// Hopping of every network edge at time t (Hz), in network.edges() order.
std::vector<double> edge_hoppings(const ControlPath& path, std::span<const std::size_t> binding,
                                  double t);

/// CSV columns: time_s, kappa_<a>_<b>_hz per axis.
void write_path_csv(std::ostream& out, const ControlPath& path, double sample_interval_s);

} // namespace hlab
