#include <doctest.h>

#include <random>

#include "holonomylab/braid.hpp"
#include "holonomylab/error.hpp"
#include "holonomylab/gates.hpp"
#include "holonomylab/holonomy.hpp"
#include "holonomylab/protocols.hpp"
#include "oracles.hpp"

using namespace hlab;
using oracle::pi;

namespace {

const std::array<Edge, 3> y_axes{Edge{"S", "X"}, Edge{"B", "X"}, Edge{"A", "X"}};

/// Dark-space basis (u, v) at hopping direction n with u x v = -n, embedded on
/// the outer sites of the star in axis order.
Eigen::MatrixXcd dark_basis(const CavityNetwork& net, const std::vector<Edge>& axes, const Eigen::Vector3d& n,
                            const Eigen::Vector3d& seed) {
    const Eigen::Vector3d u = (seed - seed.dot(n) * n).normalized();
    const Eigen::Vector3d v = u.cross(n);
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(net.size()), 2);
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& outer = axes[k].a == "X" ? axes[k].b : axes[k].a;
        const auto i = static_cast<Eigen::Index>(net.index_of(outer));
        b(i, 0) = u(static_cast<Eigen::Index>(k));
        b(i, 1) = v(static_cast<Eigen::Index>(k));
    }
    return b;
}

} // namespace

TEST_CASE("zero-mode frame agrees with the eigendecomposition oracle") {
    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    const auto net = presets::five_site_star(presets::lossless_cavity());
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> k(4);
        for (auto& x : k) x = g(rng) * 10;
        const Eigen::MatrixXd h = hopping_matrix(net, k);
        const auto frame = zero_mode_frame(h);
        CHECK(frame.dimension() == 3);
        const Eigen::MatrixXd p = (frame.basis * frame.basis.adjoint()).real();
        CHECK((p - oracle::null_projector(h, 1e-6 * h.norm())).norm() < 1e-10);
        CHECK((h * frame.basis).norm() < 1e-9 * h.norm());
    }
    CHECK(zero_mode_frame(Eigen::MatrixXd::Zero(3, 3)).dimension() == 3);
    Eigen::MatrixXd ambiguous = Eigen::MatrixXd::Zero(2, 2);
    ambiguous(0, 0) = 1.0;
    ambiguous(1, 1) = 3e-9;
    CHECK_THROWS_AS(zero_mode_frame(ambiguous), NumericalError);
}

TEST_CASE("octant loop gives Y; half circle gives Z") {
    const auto net = presets::four_site_star();
    const auto y = adiabatic_holonomy(net, octant_loop(y_axes, 8.5, LegTiming::fixed(0.1)), site_basis(net, {"A", "B"}));
    CHECK((y.matrix - gates::y()).norm() < 1e-6);
    CHECK(y.determinant == doctest::Approx(1.0));
    CHECK(y.orthogonality_defect < 1e-9);

    const auto zn = presets::z_gate_network();
    const auto z = adiabatic_holonomy(zn, half_circle({"A", "X"}, {"X", "S"}, 8.5, 0.1), site_basis(zn, {"B", "A"}));
    CHECK((z.matrix - gates::z()).norm() < 1e-6);
}

TEST_CASE("holonomy is geometric: independent of timing and kappa scale") {
    const auto net = presets::four_site_star();
    const auto ref = site_basis(net, {"A", "B"});
    const auto a = adiabatic_holonomy(net, octant_loop(y_axes, 8.5, LegTiming::fixed(0.1)), ref).matrix;
    const auto b = adiabatic_holonomy(net, octant_loop(y_axes, 2.0, LegTiming::fixed(0.7)), ref).matrix;
    CHECK((a - b).norm() < 1e-9);
}

TEST_CASE("gauge covariance: rotating the reference conjugates the holonomy") {
    const auto net = presets::four_site_star();
    const auto path = octant_loop(y_axes, 8.5, LegTiming::fixed(0.1));
    const auto ref = site_basis(net, {"A", "B"});
    const auto m = adiabatic_holonomy(net, path, ref).matrix;
    for (double theta : {0.3, 1.1, 2.5}) {
        const Eigen::Matrix2d r = oracle::rotation(theta);
        const Eigen::MatrixXcd rotated = ref * r.cast<std::complex<double>>();
        const auto mr = adiabatic_holonomy(net, path, rotated).matrix;
        CHECK((mr - r.transpose() * m * r).norm() < 1e-9);
    }
}

TEST_CASE("holonomy equals U(solid angle) on random closed loops") {
    std::mt19937 rng(99);
    std::normal_distribution<double> g;
    const auto net = presets::four_site_star();
    const std::vector<Edge> axes{{"S", "X"}, {"B", "X"}, {"A", "X"}};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Direction> verts;
        const int n = 3 + trial % 3;
        for (int k = 0; k < n; ++k) verts.push_back(Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized());
        ControlPath path = [&] {
            try {
                return geodesic_loop(axes, verts, 8.5, LegTiming::fixed(0.1));
            } catch (const ConfigError&) {
                verts.resize(3);
                return geodesic_loop(axes, verts, 8.5, LegTiming::fixed(0.1));
            }
        }();
        const Eigen::Vector3d n0 = path.direction_at(0.0);
        const auto ref = dark_basis(net, axes, n0, Eigen::Vector3d(g(rng), g(rng), g(rng)));
        const auto m = adiabatic_holonomy(net, path, ref, 4000).matrix;
        CHECK((m - oracle::rotation(solid_angle(path))).norm() < 1e-3);
    }
}

TEST_CASE("transport convergence with step count") {
    const auto net = presets::four_site_star();
    const auto c = holonomy_convergence(net, hadamard_path(8.5, LegTiming::resonant()).embedded({{"A", "X"}, {"B", "X"}, {"S", "X"}}),
                                        site_basis(net, {"A", "B"}), 200);
    CHECK(c.fine_change <= c.coarse_change + 1e-12);
    CHECK(c.coarse_change < 1e-3);
}

TEST_CASE("adiabatic holonomy rejects bad inputs") {
    const auto net = presets::four_site_star();
    const auto path = octant_loop(y_axes, 8.5, LegTiming::fixed(0.1));
    CHECK_THROWS_AS(adiabatic_holonomy(net, path, site_basis(net, {"A", "S"})), ConfigError);
    CHECK_THROWS_AS(adiabatic_holonomy(net, path, site_basis(net, {"A", "B"}), 50), ConfigError);
    const auto open = quarter_circle({"S", "X"}, {"A", "X"}, 8.5, 0.1).embedded({{"S", "X"}, {"B", "X"}, {"A", "X"}});
    CHECK_THROWS_AS(adiabatic_holonomy(net, open, site_basis(net, {"A", "B"})), ConfigError);
    CHECK_THROWS_AS(site_basis(net, {"A", "A"}), ConfigError);
}

TEST_CASE("dynamic extraction agrees with the adiabatic holonomy at resonant timing") {
    for (const char* gate : {"Y", "Z", "H"}) {
        const auto p = make_gate_protocol(gate, 8.5, LegTiming::resonant(), presets::paper_cavity());
        const auto ref = site_basis(p.network, p.basis);
        const auto ad = adiabatic_holonomy(p.network, p.path, ref);
        const auto dy = dynamic_holonomy(p.network, p.path, ref);
        CAPTURE(gate);
        CHECK((ad.matrix - dy.matrix).norm() < 1e-3);
        CHECK(dy.leakage < 1e-6);
        CHECK(gate_fidelity(dy.matrix, p.target) > 0.999);
    }
}

TEST_CASE("dynamic extraction at slow non-resonant timing stays close") {
    const auto p = make_gate_protocol("Y", 8.5, LegTiming::fixed(0.5), presets::paper_cavity());
    const auto ref = site_basis(p.network, p.basis);
    const auto dy = dynamic_holonomy(p.network, p.path, ref);
    CHECK((dy.matrix - p.target).norm() < 0.05);
}

TEST_CASE("sudden switching is an adiabaticity failure") {
    const auto p = make_gate_protocol("Y", 8.5, LegTiming::fixed(0.004), presets::paper_cavity());
    const auto ref = site_basis(p.network, p.basis);
    try {
        dynamic_holonomy(p.network, p.path, ref);
        FAIL("expected an adiabaticity error");
    } catch (const AdiabaticityError& e) {
        CHECK(e.leakage() > 0.1);
        CHECK(e.category() == Error::Category::adiabaticity);
    }
}

TEST_CASE("fidelity metric") {
    CHECK(gate_fidelity(gates::y(), gates::y()) == doctest::Approx(1.0));
    CHECK(gate_fidelity(-gates::y(), gates::y()) == doctest::Approx(1.0));
    CHECK(gate_fidelity(gates::z(), gates::y()) == doctest::Approx(0.0));
    CHECK_THROWS_AS(gate_fidelity(gates::g1(), gates::y()), ConfigError);
}

TEST_CASE("result json carries the matrix and diagnostics") {
    const auto p = make_gate_protocol("Z", 8.5, LegTiming::resonant(), presets::paper_cavity());
    auto r = adiabatic_holonomy(p.network, p.path, site_basis(p.network, p.basis));
    r.fidelity = gate_fidelity(r.matrix, p.target);
    const auto j = r.to_json();
    CHECK(j["method"] == "adiabatic-oracle");
    CHECK(j["matrix"].size() == 2);
    CHECK(j["fidelity"].get<double>() == doctest::Approx(1.0));
}
