#include <doctest.h>

#include <random>

#include "holonomylab/error.hpp"
#include "holonomylab/network.hpp"

using namespace hlab;

TEST_CASE("preset site orders and cavity parameters") {
    CHECK(presets::two_site().labels() == std::vector<std::string>{"A", "X"});
    CHECK(presets::three_site_chain().labels() == std::vector<std::string>{"A", "X", "S"});
    CHECK(presets::z_gate_network().labels() == std::vector<std::string>{"A", "B", "X", "S"});
    CHECK(presets::four_site_star().labels() == std::vector<std::string>{"A", "B", "S", "X"});
    CHECK(presets::five_site_star().labels() == std::vector<std::string>{"A", "B", "C", "S", "X"});
    CHECK(presets::z_gate_network().edges().size() == 2);

    const auto p = presets::paper_cavity();
    CHECK(p.f0_hz == 1624.0);
    CHECK(p.net_decay_hz() == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(presets::bare_cavity().net_decay_hz() == 8.0);
    CHECK_THROWS_AS(presets::network_by_name("ring", p), ConfigError);
    CHECK_THROWS_AS(presets::cavity_by_name("superconducting"), ConfigError);
}

TEST_CASE("cavity validation rejects net gain and bad frequencies") {
    CHECK_THROWS_AS((CavityParams{1624, 1, 2}.validate()), ConfigError);
    CHECK_THROWS_AS((CavityParams{0, 1, 0}.validate()), ConfigError);
    CHECK_THROWS_AS((CavityParams{1624, -1, -2}.validate()), ConfigError);
    CHECK_NOTHROW((CavityParams{1624, 8, 7.4}.validate()));
}

TEST_CASE("network construction errors") {
    const CavityParams p = presets::paper_cavity();
    CHECK_THROWS_AS(CavityNetwork({"A", "A"}, {p, p}, {}), ConfigError);
    CHECK_THROWS_AS(CavityNetwork({"A", "X"}, {p, p}, {{"A", "Q"}}), ConfigError);
    CHECK_THROWS_AS(CavityNetwork({"A", "X"}, {p, p}, {{"A", "X"}, {"X", "A"}}), ConfigError);
    CHECK_THROWS_AS(CavityNetwork({"A", "X"}, {p}, {}), ConfigError);
    const auto net = presets::three_site_chain();
    CHECK(net.index_of("S") == 2);
    CHECK_THROWS_AS(net.index_of("Q"), ConfigError);
    CHECK(net.edge_index({"S", "X"}) == 1);
}

TEST_CASE("json round trip and strictness") {
    const auto net = presets::five_site_star();
    const auto back = CavityNetwork::from_json(net.to_json());
    CHECK(back.labels() == net.labels());
    CHECK(back.params() == net.params());
    CHECK(back.edges().size() == net.edges().size());

    auto doc = net.to_json();
    doc["colour"] = "blue";
    CHECK_THROWS_AS(CavityNetwork::from_json(doc), ConfigError);
    doc = net.to_json();
    doc["edges"].push_back({"A", "Z"});
    CHECK_THROWS_AS(CavityNetwork::from_json(doc), ConfigError);
}

TEST_CASE("hamiltonian entries in both frames") {
    const auto net = presets::two_site();
    const std::vector<double> k{8.5};
    const auto rot = assemble_hamiltonian(net, k, Frame::rotating);
    const double two_pi = 2.0 * std::numbers::pi;
    CHECK(rot.matrix(0, 0).real() == doctest::Approx(0.0));
    CHECK(rot.matrix(0, 0).imag() == doctest::Approx(-two_pi * 0.6));
    CHECK(rot.matrix(0, 1).real() == doctest::Approx(two_pi * 8.5));
    CHECK(rot.matrix(1, 0) == rot.matrix(0, 1));

    const auto lab = assemble_hamiltonian(net, k, Frame::lab);
    CHECK(lab.matrix(1, 1).real() == doctest::Approx(two_pi * 1624.0));
    CHECK(rot.basis == net.labels());
    CHECK_THROWS_AS(assemble_hamiltonian(net, std::vector<double>{1.0, 2.0}), ConfigError);
}

TEST_CASE("lossless hamiltonian is hermitian; uniform loss factors out") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> k(4);
        for (auto& x : k) x = u(rng);
        const auto lossless = assemble_hamiltonian(presets::five_site_star(presets::lossless_cavity()), k);
        CHECK((lossless.matrix - lossless.matrix.adjoint()).norm() == doctest::Approx(0.0));

        const auto lossy = assemble_hamiltonian(presets::five_site_star(), k);
        const auto f = factor_uniform_loss(lossy);
        CHECK(f.decay_hz == doctest::Approx(0.6).epsilon(1e-12));
        const Eigen::MatrixXcd rebuilt =
            f.lossless.matrix - std::complex<double>(0.0, 2.0 * std::numbers::pi * f.decay_hz) *
                                    Eigen::MatrixXcd::Identity(5, 5);
        CHECK((rebuilt - lossy.matrix).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((f.lossless.matrix - f.lossless.matrix.adjoint()).norm() <= 1e-10);
    }
}

TEST_CASE("non-uniform loss cannot be factored") {
    const auto p = presets::paper_cavity();
    const auto b = presets::bare_cavity();
    const CavityNetwork net({"A", "X"}, {p, CavityParams{p.f0_hz, b.gamma0_hz, 0.0}}, {{"A", "X"}});
    CHECK_THROWS_AS(factor_uniform_loss(assemble_hamiltonian(net, std::vector<double>{1.0})), NumericalError);
}

TEST_CASE("relabelling sites permutes the hamiltonian") {
    const auto net = presets::five_site_star();
    const std::vector<double> k{1.0, -2.0, 3.5, 0.25};
    const std::vector<std::size_t> order{4, 2, 0, 3, 1};
    const auto perm = net.permuted(order);
    const auto h = assemble_hamiltonian(net, k).matrix;
    // Edge order is preserved by permuted(), so the same hopping vector applies.
    const auto hp = assemble_hamiltonian(perm, k).matrix;
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(std::abs(hp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                           h(static_cast<Eigen::Index>(order[i]), static_cast<Eigen::Index>(order[j]))) < 1e-12);
        }
    }
    CHECK(perm.labels()[0] == "X");
}

TEST_CASE("frame names") {
    CHECK(parse_frame("lab") == Frame::lab);
    CHECK(frame_name(Frame::rotating) == "rotating");
    CHECK_THROWS_AS(parse_frame("inertial"), ConfigError);
}
