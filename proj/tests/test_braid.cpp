#include <doctest.h>

#include <random>

#include "holonomylab/braid.hpp"
#include "holonomylab/error.hpp"
#include "holonomylab/gates.hpp"
#include "holonomylab/holonomy.hpp"

using namespace hlab;

namespace {

Eigen::Matrix3d adiabatic(const BraidWord& w) {
    const auto net = presets::five_site_star();
    return adiabatic_holonomy(net, compile_braid(w, 8.5, LegTiming::resonant()), site_basis(net, {"A", "B", "C"}))
        .matrix;
}

BraidWord random_word(std::mt19937& rng, int length) {
    std::uniform_int_distribution<int> pick(0, 3);
    std::vector<Generator> letters;
    for (int k = 0; k < length; ++k) letters.push_back(static_cast<Generator>(pick(rng)));
    return BraidWord(letters);
}

} // namespace

TEST_CASE("braid word parsing") {
    const auto w = BraidWord::parse("G2 G1' G1_inv  G2_inv");
    CHECK(w.letters() == std::vector<Generator>{Generator::g2, Generator::g1_inv, Generator::g1_inv, Generator::g2_inv});
    CHECK(BraidWord::parse(w.to_string()) == w);
    CHECK(BraidWord::parse("G2G1") == BraidWord::parse("G2 G1"));
    CHECK(BraidWord::parse("G2'G1_invG1") == BraidWord::parse("G2' G1' G1"));
    CHECK_THROWS_AS(BraidWord::parse("G1x"), ConfigError);
    CHECK_THROWS_AS(BraidWord::parse("G12"), ConfigError);
    CHECK(BraidWord::parse("").empty());
    CHECK_THROWS_AS(BraidWord::parse("G3"), ConfigError);
    CHECK_THROWS_AS(BraidWord::parse("G1 x"), ConfigError);
    CHECK(w.inverse().inverse() == w);
    CHECK(BraidWord::parse("G1").then(BraidWord::parse("G2")) == BraidWord::parse("G2 G1"));
}

TEST_CASE("generator matrices") {
    Eigen::Matrix3d g1 = Eigen::Matrix3d::Identity();
    g1.topLeftCorner<2, 2>() = gates::y();
    CHECK((gates::g1() - g1).norm() == 0.0);
    CHECK((predict_holonomy(BraidWord::parse("G1")) - gates::g1()).norm() == 0.0);
    CHECK((predict_holonomy(BraidWord::parse("G2'")) - gates::g2().transpose()).norm() == 0.0);
}

TEST_CASE("G2 G1 maps (A, B, C) to (C, -A, -B); G1 G2 to (B, C, A)") {
    Eigen::Matrix3d g2g1;
    g2g1.col(0) = Eigen::Vector3d(0, 0, 1);
    g2g1.col(1) = Eigen::Vector3d(-1, 0, 0);
    g2g1.col(2) = Eigen::Vector3d(0, -1, 0);
    Eigen::Matrix3d g1g2;
    g1g2.col(0) = Eigen::Vector3d(0, 1, 0);
    g1g2.col(1) = Eigen::Vector3d(0, 0, 1);
    g1g2.col(2) = Eigen::Vector3d(1, 0, 0);
    CHECK((predict_holonomy(BraidWord::parse("G2 G1")) - g2g1).norm() < 1e-12);
    CHECK((predict_holonomy(BraidWord::parse("G1 G2")) - g1g2).norm() < 1e-12);
    CHECK((adiabatic(BraidWord::parse("G2 G1")) - g2g1).norm() < 1e-6);
    CHECK((adiabatic(BraidWord::parse("G1 G2")) - g1g2).norm() < 1e-6);
    CHECK((g2g1 - g1g2).norm() >= 1.0);
}

TEST_CASE("compiled braids are closed loops based at the S direction") {
    std::mt19937 rng(5);
    for (int len = 1; len <= 4; ++len) {
        const auto path = compile_braid(random_word(rng, len), 8.5, LegTiming::resonant());
        CHECK(path.closed());
        CHECK(path.legs().size() == static_cast<std::size_t>(3 * len));
        CHECK(path.axes().size() == 4);
        CHECK(path.direction_at(0.0)(3) == doctest::Approx(1.0));
    }
    CHECK(compile_braid(BraidWord{}, 8.5, LegTiming::resonant()).total_duration() == 0.0);
}

TEST_CASE("every word of length <= 2: transport equals the generator product") {
    std::vector<BraidWord> words{BraidWord{}};
    for (int a = 0; a < 4; ++a) {
        words.push_back(BraidWord({static_cast<Generator>(a)}));
        for (int b = 0; b < 4; ++b) words.push_back(BraidWord({static_cast<Generator>(a), static_cast<Generator>(b)}));
    }
    for (const auto& w : words) {
        if (w.empty()) continue;
        CAPTURE(w.to_string());
        CHECK((adiabatic(w) - predict_holonomy(w)).norm() < 1e-3);
    }
}

TEST_CASE("random words times their inverse give the identity") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const auto w = random_word(rng, 1 + trial % 3);
        const auto loop = w.then(w.inverse());
        CAPTURE(loop.to_string());
        CHECK((predict_holonomy(loop) - Eigen::Matrix3d::Identity()).norm() < 1e-12);
        CHECK((adiabatic(loop) - Eigen::Matrix3d::Identity()).norm() < 1e-3);
    }
}

TEST_CASE("braid relation G1 G2 G1 = G2 G1 G2") {
    const auto lhs = BraidWord::parse("G1 G2 G1"), rhs = BraidWord::parse("G2 G1 G2");
    CHECK((predict_holonomy(lhs) - predict_holonomy(rhs)).norm() < 1e-12);
    CHECK((adiabatic(lhs) - adiabatic(rhs)).norm() < 1e-3);
}
