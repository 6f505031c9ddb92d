#include "holonomylab/control_path.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "holonomylab/error.hpp"

namespace hlab {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double unit_tol = 1e-12;

void require_unit(const Direction& d, const char* what) {
    if (d.size() == 0 || !d.allFinite() || std::abs(d.norm() - 1.0) > unit_tol) {
        throw ConfigError(std::string(what) + " must be a finite unit vector");
    }
}

void require_duration(double duration_s) {
    if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
        throw ConfigError("leg duration must be positive and finite");
    }
}

Direction axis_vector(std::size_t dim, std::size_t k) {
    Direction d = Direction::Zero(static_cast<Eigen::Index>(dim));
    d(static_cast<Eigen::Index>(k)) = 1.0;
    return d;
}

void require_distinct(const std::vector<Edge>& axes) {
    for (std::size_t i = 0; i < axes.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (axes[i].same_as(axes[j])) {
                throw ConfigError("control axes must be distinct edges (" + axes[i].name() +
                                  " repeated)");
            }
        }
    }
}

} // namespace

PathLeg::PathLeg(Direction start, Direction tangent, Direction end, double angle, double duration)
    : start_(std::move(start)), tangent_(std::move(tangent)), end_(std::move(end)),
      angle_(angle), duration_(duration) {}

PathLeg PathLeg::arc(Direction start, Direction tangent, double angle, double duration_s) {
    require_unit(start, "leg start direction");
    require_unit(tangent, "leg tangent");
    require_duration(duration_s);
    if (start.size() != tangent.size()) throw ConfigError("leg start/tangent dimension mismatch");
    if (std::abs(start.dot(tangent)) > unit_tol) {
        throw ConfigError("leg tangent must be orthogonal to the start direction");
    }
    if (!(angle >= 0.0) || !std::isfinite(angle)) throw ConfigError("leg angle must be >= 0");
    Direction end = std::cos(angle) * start + std::sin(angle) * tangent;
    return PathLeg(std::move(start), std::move(tangent), std::move(end), angle, duration_s);
}

PathLeg PathLeg::geodesic(const Direction& start, const Direction& end, double duration_s) {
    require_unit(start, "leg start direction");
    require_unit(end, "leg end direction");
    require_duration(duration_s);
    if (start.size() != end.size()) throw ConfigError("leg start/end dimension mismatch");
    const double c = std::clamp(start.dot(end), -1.0, 1.0);
    Direction perp = end - c * start;
    const double s = perp.norm();
    if (s < 1e-9) {
        if (c > 0.0) {
            throw ConfigError("geodesic leg between identical directions (repeated vertex)");
        }
        throw ConfigError("geodesic leg between antipodal directions is ambiguous");
    }
    Direction tangent = perp / s;
    return PathLeg(start, std::move(tangent), end, std::atan2(s, c), duration_s);
}

PathLeg PathLeg::hold(Direction direction, double duration_s) {
    require_unit(direction, "hold direction");
    require_duration(duration_s);
    // Any unit tangent orthogonal to the direction keeps the invariants.
    Direction tangent = Direction::Zero(direction.size());
    if (direction.size() > 1) {
        Eigen::Index k = 0;
        direction.cwiseAbs().minCoeff(&k);
        tangent(k) = 1.0;
        tangent -= tangent.dot(direction) * direction;
        tangent.normalize();
    }
    Direction end = direction;
    return PathLeg(std::move(direction), std::move(tangent), std::move(end), 0.0, duration_s);
}

Direction PathLeg::direction_at(double local_t) const {
    if (local_t <= 0.0) return start_;
    if (local_t >= duration_) return end_;
    const double theta = angle_ * local_t / duration_;
    return std::cos(theta) * start_ + std::sin(theta) * tangent_;
}

PathLeg PathLeg::reversed() const {
    // Tangent of the reversed arc is minus the forward velocity at the end.
    Direction tangent = std::sin(angle_) * start_ - std::cos(angle_) * tangent_;
    if (angle_ == 0.0) tangent = tangent_;
    return PathLeg(end_, std::move(tangent), start_, angle_, duration_);
}

PathLeg PathLeg::negated() const {
    return PathLeg(-start_, -tangent_, -end_, angle_, duration_);
}

PathLeg PathLeg::with_duration(double duration_s) const {
    require_duration(duration_s);
    PathLeg leg = *this;
    leg.duration_ = duration_s;
    return leg;
}

ControlPath::ControlPath(std::vector<Edge> axes, std::vector<PathLeg> legs, double kappa_max_hz)
    : axes_(std::move(axes)), legs_(std::move(legs)), kappa_max_hz_(kappa_max_hz) {
    if (axes_.empty()) throw ConfigError("control path needs at least one axis");
    require_distinct(axes_);
    if (!(kappa_max_hz_ >= 0.0) || !std::isfinite(kappa_max_hz_)) {
        throw ConfigError("kappa_max must be finite and non-negative");
    }
    double t = 0.0;
    for (std::size_t k = 0; k < legs_.size(); ++k) {
        if (static_cast<std::size_t>(legs_[k].start().size()) != axes_.size()) {
            throw ConfigError("leg dimension does not match the number of axes");
        }
        if (k > 0 && (legs_[k].start() - legs_[k - 1].end()).norm() > unit_tol) {
            throw ConfigError("consecutive legs must share endpoints (leg " + std::to_string(k) +
                              ")");
        }
        leg_start_.push_back(t);
        t += legs_[k].duration();
    }
}

double ControlPath::total_duration() const {
    double t = 0.0;
    for (const auto& leg : legs_) t += leg.duration();
    return t;
}

bool ControlPath::closed() const {
    if (legs_.empty()) return true;
    return (legs_.front().start() - legs_.back().end()).norm() <= unit_tol;
}

std::vector<double> ControlPath::leg_end_times() const {
    std::vector<double> out;
    double t = 0.0;
    for (const auto& leg : legs_) {
        t += leg.duration();
        out.push_back(t);
    }
    return out;
}

Direction ControlPath::direction_at(double t) const {
    if (legs_.empty()) throw ConfigError("empty control path has no direction");
    auto it = std::upper_bound(leg_start_.begin(), leg_start_.end(), t);
    const std::size_t k = it == leg_start_.begin()
                              ? 0
                              : static_cast<std::size_t>(it - leg_start_.begin()) - 1;
    return legs_[k].direction_at(t - leg_start_[k]);
}

Eigen::VectorXd ControlPath::hoppings_at(double t) const {
    return kappa_max_hz_ * direction_at(t);
}

ControlPath ControlPath::reversed() const {
    std::vector<PathLeg> legs;
    for (auto it = legs_.rbegin(); it != legs_.rend(); ++it) legs.push_back(it->reversed());
    return ControlPath(axes_, std::move(legs), kappa_max_hz_);
}

ControlPath ControlPath::negated() const {
    std::vector<PathLeg> legs;
    for (const auto& leg : legs_) legs.push_back(leg.negated());
    return ControlPath(axes_, std::move(legs), kappa_max_hz_);
}

ControlPath ControlPath::with_total_duration(double total_s) const {
    require_duration(total_s);
    if (legs_.empty()) throw ConfigError("cannot rescale an empty path");
    const double scale = total_s / total_duration();
    std::vector<PathLeg> legs;
    for (const auto& leg : legs_) legs.push_back(leg.with_duration(leg.duration() * scale));
    return ControlPath(axes_, std::move(legs), kappa_max_hz_);
}

ControlPath ControlPath::with_kappa_max(double kappa_max_hz) const {
    return ControlPath(axes_, legs_, kappa_max_hz);
}

ControlPath ControlPath::embedded(const std::vector<Edge>& axes) const {
    std::vector<std::size_t> slot;
    for (const auto& a : axes_) {
        auto it = std::find_if(axes.begin(), axes.end(), [&](const Edge& e) { return e.same_as(a); });
        if (it == axes.end()) throw ConfigError("axis " + a.name() + " missing from embedding");
        slot.push_back(static_cast<std::size_t>(it - axes.begin()));
    }
    auto lift = [&](const Direction& d) {
        Direction out = Direction::Zero(static_cast<Eigen::Index>(axes.size()));
        for (std::size_t k = 0; k < slot.size(); ++k) {
            out(static_cast<Eigen::Index>(slot[k])) = d(static_cast<Eigen::Index>(k));
        }
        return out;
    };
    std::vector<PathLeg> legs;
    for (const auto& leg : legs_) {
        legs.push_back(leg.angle() == 0.0
                           ? PathLeg::hold(lift(leg.start()), leg.duration())
                           : PathLeg::arc(lift(leg.start()), lift(leg.tangent()), leg.angle(),
                                          leg.duration()));
    }
    return ControlPath(axes, std::move(legs), kappa_max_hz_);
}

LegTiming LegTiming::fixed(double duration_s) {
    require_duration(duration_s);
    return LegTiming(false, duration_s, 0);
}

LegTiming LegTiming::resonant(int order) {
    if (order < 1) throw ConfigError("resonant timing order must be >= 1");
    return LegTiming(true, 0.0, order);
}

double LegTiming::duration_for(double arc_angle, double kappa_max_hz) const {
    return resonant_ ? resonant_leg_duration(arc_angle, kappa_max_hz, order_) : duration_;
}

double resonant_leg_duration(double arc_angle, double kappa_max_hz, int order) {
    if (!(kappa_max_hz > 0.0)) throw ConfigError("resonant timing needs kappa_max > 0");
    const double cycles = 2.0 * pi * order;
    if (order < 1 || arc_angle >= cycles) {
        throw ConfigError("arc angle too large for the requested resonance order");
    }
    return std::sqrt(cycles * cycles - arc_angle * arc_angle) / (2.0 * pi * kappa_max_hz);
}

ControlPath concatenate(const ControlPath& first, const ControlPath& second) {
    if (first.axes().size() != second.axes().size()) {
        throw ConfigError("cannot concatenate paths over different axes");
    }
    for (std::size_t k = 0; k < first.axes().size(); ++k) {
        if (!first.axes()[k].same_as(second.axes()[k])) {
            throw ConfigError("cannot concatenate paths over different axes");
        }
    }
    if (first.kappa_max_hz() != second.kappa_max_hz()) {
        throw ConfigError("cannot concatenate paths with different kappa_max");
    }
    std::vector<PathLeg> legs = first.legs();
    legs.insert(legs.end(), second.legs().begin(), second.legs().end());
    return ControlPath(first.axes(), std::move(legs), first.kappa_max_hz());
}

ControlPath constant_hopping(std::vector<Edge> axes, const Eigen::VectorXd& kappa_hz,
                             double duration_s) {
    if (static_cast<std::size_t>(kappa_hz.size()) != axes.size()) {
        throw ConfigError("constant hopping: one value per axis required");
    }
    if (!kappa_hz.allFinite()) throw ConfigError("constant hopping: non-finite value");
    const double norm = kappa_hz.norm();
    if (norm == 0.0) {
        // Direction is irrelevant when kappa_max is zero.
        return ControlPath(std::move(axes),
                           {PathLeg::hold(axis_vector(kappa_hz.size(), 0), duration_s)}, 0.0);
    }
    return ControlPath(std::move(axes), {PathLeg::hold(kappa_hz / norm, duration_s)}, norm);
}

ControlPath quarter_circle(const Edge& edge_from, const Edge& edge_to, double kappa_max_hz,
                           double duration_s) {
    std::vector<Edge> axes{edge_from, edge_to};
    require_distinct(axes);
    auto leg = PathLeg::arc(axis_vector(2, 0), axis_vector(2, 1), pi / 2, duration_s);
    return ControlPath(std::move(axes), {leg}, kappa_max_hz);
}

ControlPath half_circle(const Edge& axis_1, const Edge& axis_2, double kappa_max_hz,
                        double duration_s) {
    std::vector<Edge> axes{axis_1, axis_2};
    require_distinct(axes);
    auto leg = PathLeg::arc(axis_vector(2, 1), axis_vector(2, 0), pi, duration_s);
    return ControlPath(std::move(axes), {leg}, kappa_max_hz);
}

ControlPath octant_loop(const std::array<Edge, 3>& axes, double kappa_max_hz, LegTiming timing) {
    std::vector<Edge> ax(axes.begin(), axes.end());
    return geodesic_loop(std::move(ax), {axis_vector(3, 0), axis_vector(3, 2), axis_vector(3, 1)},
                         kappa_max_hz, timing);
}

ControlPath geodesic_loop(std::vector<Edge> axes, const std::vector<Direction>& vertices,
                          double kappa_max_hz, LegTiming timing) {
    require_distinct(axes);
    if (vertices.size() < 2) throw ConfigError("geodesic loop needs at least two vertices");
    std::vector<Direction> unit;
    for (const auto& v : vertices) {
        if (static_cast<std::size_t>(v.size()) != axes.size()) {
            throw ConfigError("loop vertex dimension does not match the number of axes");
        }
        if (!v.allFinite() || v.norm() == 0.0) throw ConfigError("loop vertex must be nonzero");
        unit.push_back(v.normalized());
    }
    std::vector<PathLeg> legs;
    for (std::size_t k = 0; k < unit.size(); ++k) {
        const Direction& a = k == 0 ? unit[0] : legs.back().end();
        const Direction& b = unit[(k + 1) % unit.size()];
        const double angle = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
        legs.push_back(PathLeg::geodesic(a, b, timing.duration_for(angle, kappa_max_hz)));
    }
    // Close exactly on the first vertex.
    PathLeg& last = legs.back();
    last = PathLeg::geodesic(last.start(), unit.front(), last.duration());
    return ControlPath(std::move(axes), std::move(legs), kappa_max_hz);
}

double solid_angle(const ControlPath& path) {
    if (path.dimension() != 3) throw ConfigError("solid angle needs a 3-dimensional hopping space");
    if (path.legs().empty()) return 0.0;
    if ((path.legs().front().start() - path.legs().back().end()).norm() > 1e-9) {
        throw ConfigError("solid angle needs a closed path");
    }
    std::vector<Eigen::Vector3d> pts;
    for (const auto& leg : path.legs()) {
        if (leg.angle() == 0.0) continue;
        const int pieces = std::max(1, static_cast<int>(std::ceil(leg.angle() / (pi / 4))));
        for (int p = 0; p < pieces; ++p) {
            pts.emplace_back(leg.direction_at(leg.duration() * p / pieces));
        }
    }
    if (pts.size() < 3) return 0.0;
    // Fan of signed triangles from the first vertex (Van Oosterom-Strackee),
    // sign flipped to the centre-view orientation.
    const Eigen::Vector3d& o = pts.front();
    double total = 0.0;
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
        const Eigen::Vector3d& a = pts[k];
        const Eigen::Vector3d& b = pts[k + 1];
        const double num = o.dot(a.cross(b));
        const double den = 1.0 + o.dot(a) + a.dot(b) + b.dot(o);
        total -= 2.0 * std::atan2(num, den);
    }
    // Wrap to (-2 pi, 2 pi].
    total = std::remainder(total, 4.0 * pi);
    if (total <= -2.0 * pi) total += 4.0 * pi;
    return total;
}

std::vector<std::size_t> bind_axes(const CavityNetwork& network, const ControlPath& path) {
    std::vector<std::size_t> binding;
    for (const auto& edge : network.edges()) {
        auto it = std::find_if(path.axes().begin(), path.axes().end(),
                               [&](const Edge& a) { return a.same_as(edge); });
        if (it == path.axes().end()) {
            throw ConfigError("network edge " + edge.name() + " is not driven by the path");
        }
        binding.push_back(static_cast<std::size_t>(it - path.axes().begin()));
    }
    for (const auto& a : path.axes()) network.edge_index(a);
    return binding;
}

std::vector<double> edge_hoppings(const ControlPath& path, std::span<const std::size_t> binding,
                                  double t) {
    const Eigen::VectorXd h = path.hoppings_at(t);
    std::vector<double> out;
    out.reserve(binding.size());
    for (std::size_t axis : binding) out.push_back(h(static_cast<Eigen::Index>(axis)));
    return out;
}

void write_path_csv(std::ostream& out, const ControlPath& path, double sample_interval_s) {
    if (!(sample_interval_s > 0.0)) throw ConfigError("sample interval must be positive");
    out << "time_s";
    for (const auto& a : path.axes()) out << ",kappa_" << a.a << '_' << a.b << "_hz";
    out << '\n';
    const double total = path.total_duration();
    const auto n = static_cast<long>(std::ceil(total / sample_interval_s - 1e-9));
    char buf[64];
    for (long k = 0; k <= n; ++k) {
        const double t = std::min(total, static_cast<double>(k) * sample_interval_s);
        std::snprintf(buf, sizeof buf, "%.9g", t);
        out << buf;
        const Eigen::VectorXd h = path.hoppings_at(t);
        for (Eigen::Index i = 0; i < h.size(); ++i) {
            std::snprintf(buf, sizeof buf, ",%.12g", h(i));
            out << buf;
        }
        out << '\n';
    }
}

} // namespace hlab
