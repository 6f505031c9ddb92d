#include <doctest.h>

#include <fstream>
#include <regex>

#include "holonomylab/error.hpp"
#include "holonomylab/experiment.hpp"

using namespace hlab;
using json = nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("holonomylab_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string config_error(const std::string& text) {
    try {
        ExperimentConfig::parse(text, "cfg.json");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

const char* rabi = R"({
  "version": 1,
  "network": "two_site",
  "path": {"type": "constant", "edges": [["A", "X"]], "kappa_hz": [8.5], "duration_s": 0.1},
  "initial": "A"
})";

} // namespace

TEST_CASE("every shipped run preset parses") {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(HOLONOMYLAB_PRESET_DIR)) {
        const auto doc = json::parse(std::ifstream(entry.path()));
        if (!doc.contains("path")) continue;
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(ExperimentConfig::load(entry.path()));
        ++count;
    }
    CHECK(count >= 5);
}

TEST_CASE("minimal config and defaults") {
    const auto cfg = ExperimentConfig::parse(rabi);
    CHECK(cfg.path_type == "constant");
    CHECK(cfg.inputs.size() == 1);
    CHECK(cfg.inputs[0].first == "A");
    CHECK(cfg.evolve.dt_s == 1e-5);
    CHECK(cfg.write_trajectory);
    CHECK_FALSE(cfg.waveform.has_value());
}

TEST_CASE("config errors name the file and line") {
    const std::regex anchored(R"(^cfg\.json:(\d+): .*)");
    std::smatch m;

    std::string text = rabi;
    text.replace(text.find("\"initial\": \"A\""), 14, "\"initial\": \"Q\"");
    auto msg = config_error(text);
    REQUIRE(std::regex_match(msg, m, anchored));
    CHECK(m[1] == "5");
    CHECK(msg.find("Q") != std::string::npos);

    text = rabi;
    text.replace(text.find("[[\"A\", \"X\"]]"), 12, "[[\"A\", \"S\"]]");
    msg = config_error(text);
    REQUIRE(std::regex_match(msg, m, anchored));
    CHECK(m[1] == "4");

    text = rabi;
    text.replace(text.find("\"version\": 1"), 12, "\"version\": 2");
    msg = config_error(text);
    REQUIRE(std::regex_match(msg, m, anchored));
    CHECK(m[1] == "2");

    text = rabi;
    text.insert(text.find("\"initial\""), "\"colour\": \"red\",\n  ");
    msg = config_error(text);
    REQUIRE(std::regex_match(msg, m, anchored));
    CHECK(m[1] == "5");

    CHECK_FALSE(config_error("{ not json").empty());
    CHECK_FALSE(config_error(R"({"version": 1, "network": "two_site", "initial": "A"})").empty());
    CHECK_FALSE(config_error(R"({"version": 1, "network": "two_site", "initial": "A",
        "path": {"type": "constant", "edges": [["A", "X"]], "kappa_hz": [8.5], "duration_s": 0.1, "word": "G1"}})").empty());
    CHECK_FALSE(config_error(R"({"version": 1, "network": "five_site_star", "initial": "A",
        "path": {"type": "braid", "word": "G1 G7", "kappa_max_hz": 8.5}})").empty());
}

TEST_CASE("network forms: preset with cavity, file, inline") {
    const auto dir = scratch("netforms");
    std::ofstream(dir / "net.json") << presets::two_site(presets::bare_cavity()).to_json().dump();
    const std::string path = R"("path": {"type": "constant", "edges": [["A", "X"]], "kappa_hz": [8.5], "duration_s": 0.01}, "initial": "A")";

    auto cfg = ExperimentConfig::parse(R"({"version": 1, "network": {"preset": "two_site", "cavity": "lossless"}, )" + path + "}");
    CHECK(cfg.network.params()[0].net_decay_hz() == 0.0);
    cfg = ExperimentConfig::parse(R"({"version": 1, "network": {"file": "net.json"}, )" + path + "}", "x", dir);
    CHECK(cfg.network.params()[0].net_decay_hz() == 8.0);
    cfg = ExperimentConfig::parse(R"({"version": 1, "network": )" + presets::two_site().to_json().dump() + ", " + path + "}");
    CHECK(cfg.network.size() == 2);
}

TEST_CASE("initial state forms") {
    const std::string head = R"({"version": 1, "network": "four_site_star",
        "path": {"type": "octant", "axes": [["S","X"],["B","X"],["A","X"]], "kappa_max_hz": 8.5}, "initial": )";
    auto cfg = ExperimentConfig::parse(head + R"({"basis": ["A", "B"]}})");
    CHECK(cfg.inputs.size() == 2);
    cfg = ExperimentConfig::parse(head + R"({"amplitudes": {"A": [0.6, 0], "B": [0, 0.8]}}})");
    CHECK(cfg.inputs[0].first == "custom");
    CHECK(cfg.inputs[0].second(1) == std::complex<double>(0, 0.8));
    CHECK_THROWS_AS(ExperimentConfig::parse(head + R"({"site": "A", "basis": ["B"]}})"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse(head + R"({"amplitudes": {"A": [0, 0]}}})"), ConfigError);
}

TEST_CASE("run writes trajectory, waveform, path and a valid summary") {
    const auto dir = scratch("run");
    auto cfg = ExperimentConfig::load(std::filesystem::path(HOLONOMYLAB_PRESET_DIR) / "fig1f_rabi.json");
    const auto summary = run_experiment(cfg, dir);
    CHECK(std::filesystem::exists(dir / "trajectory_A.csv"));
    CHECK(std::filesystem::exists(dir / "waveform_A.csv"));
    CHECK(std::filesystem::exists(dir / "path.csv"));
    CHECK(std::filesystem::exists(dir / "summary.json"));
    CHECK_NOTHROW(validate_run_summary(summary));
    CHECK(summary["runs"][0]["energy_return_period_s"].get<double>() == doctest::Approx(1.0 / 17).epsilon(1e-3));

    auto broken = summary;
    broken["runs"][0].erase("dominant_sign");
    CHECK_THROWS_AS(validate_run_summary(broken), ConfigError);
    broken = summary;
    broken["runs"][0]["transfer_ratios"]["A"] = 0.9;
    CHECK_THROWS_AS(validate_run_summary(broken), ConfigError);
}

TEST_CASE("braid run reports the output map") {
    const auto dir = scratch("braid");
    const auto summary = run_experiment(
        ExperimentConfig::load(std::filesystem::path(HOLONOMYLAB_PRESET_DIR) / "fig4_g2g1.json"), dir);
    const auto& map = summary["output_map"];
    REQUIRE(map.size() == 3);
    CHECK(map[0]["output"] == "C");
    CHECK(map[0]["sign"] == 1);
    CHECK(map[1]["output"] == "A");
    CHECK(map[1]["sign"] == -1);
    CHECK(map[2]["output"] == "B");
    CHECK(map[2]["sign"] == -1);
    for (const auto& row : map) CHECK(row["eta"].get<double>() >= 0.97);
}

TEST_CASE("verify report") {
    const auto r = verify_gate("Y", VerifySettings{});
    CHECK(r.passed);
    REQUIRE(r.inputs.size() == 2);
    CHECK(r.inputs[0].dominant == "B");
    CHECK(r.inputs[1].dominant == "A");
    CHECK(r.inputs[1].sign == -1);
    REQUIRE(r.simultaneous_phase.has_value());
    const auto j = r.to_json();
    CHECK(j["gate"] == "Y");
    CHECK(j["dynamic"]["fidelity"].get<double>() >= 0.99);
    CHECK_THROWS_AS(verify_gate("Q", VerifySettings{}), ConfigError);
}
