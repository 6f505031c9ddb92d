#include "holonomylab/protocols.hpp"

#include <cmath>
#include <numbers>

#include "holonomylab/braid.hpp"
#include "holonomylab/error.hpp"
#include "holonomylab/gates.hpp"

namespace hlab {

ControlPath hadamard_path(double kappa_max_hz, LegTiming timing) {
    const std::vector<Edge> axes{{"A", "X"}, {"B", "X"}, {"S", "X"}};
    const Direction a = Eigen::Vector3d(1, 0, 0);
    const Direction b = Eigen::Vector3d(0, 1, 0);
    const Direction s = Eigen::Vector3d(0, 0, 1);
    const double pi = std::numbers::pi;

    const ControlPath flip(axes, {PathLeg::arc(s, b, pi, timing.duration_for(pi, kappa_max_hz))},
                           kappa_max_hz);
    const ControlPath lune = geodesic_loop(axes, {-s, -a, Direction(-(a + b) / std::numbers::sqrt2)},
                                           kappa_max_hz, timing);
    return concatenate(flip, lune);
}

GateProtocol make_gate_protocol(std::string_view gate, double kappa_max_hz, LegTiming timing,
                                const CavityParams& cavity) {
    const double pi = std::numbers::pi;
    if (gate == "Y") {
        return {"Y", presets::four_site_star(cavity),
                octant_loop({Edge{"S", "X"}, Edge{"B", "X"}, Edge{"A", "X"}}, kappa_max_hz, timing),
                {"A", "B"}, gates::y()};
    }
    if (gate == "Z") {
        return {"Z", presets::z_gate_network(cavity),
                half_circle({"A", "X"}, {"X", "S"}, kappa_max_hz, timing.duration_for(pi, kappa_max_hz)),
                {"B", "A"}, gates::z()};
    }
    if (gate == "H") {
        return {"H", presets::four_site_star(cavity), hadamard_path(kappa_max_hz, timing), {"A", "B"},
                gates::hadamard()};
    }
    std::string text(gate);
    if (gate == "G2G1") text = "G2 G1";
    if (gate == "G1G2") text = "G1 G2";
    const BraidWord word = BraidWord::parse(text);
    return {word.to_string(), presets::five_site_star(cavity), compile_braid(word, kappa_max_hz, timing),
            {"A", "B", "C"}, predict_holonomy(word)};
}

} // namespace hlab
