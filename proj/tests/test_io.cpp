#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "kitaev/errors.hpp"
#include "kitaev/io.hpp"

using namespace kitaev;
using nlohmann::json;

namespace {

auto temp_file(const std::string& stem) -> std::filesystem::path {
    return std::filesystem::temp_directory_path() /
           ("kitaev_io_test_" + std::to_string(::getpid()) + "_" + stem);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("csv header matches the published schema exactly") {
    CHECK(io::csv_header() == "T,n_segments,seed,restart,objective,infidelity,iterations,wall_time_s");
}

TEST_CASE("format_double round-trips through parsing") {
    for (const double v : {0.0, 1.0 / 3.0, -2.9934e-4, 1e-300, 6.2831853071795862, -0.0}) {
        const std::string s = io::format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("csv rows serialize one line per restart") {
    std::vector<io::CsvRow> rows(2);
    rows[0] = {3.5, 200, 42, 0, "heisenberg", 1.25e-9, 31, 0.27};
    rows[1] = {3.5, 200, 43, 1, "heisenberg", 4.0e-7, 55, 0.41};
    const std::string text = io::to_csv(rows);

    std::istringstream in(text);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == io::csv_header());
    REQUIRE(std::getline(in, line));
    CHECK(line.find("3.5,200,42,0,heisenberg,") == 0);
    REQUIRE(std::getline(in, line));
    CHECK(line.find(",43,1,") != std::string::npos);
    CHECK(!std::getline(in, line));
}

TEST_CASE("rows_from_result copies the restart ledger") {
    OptimizationResult res;
    res.best_infidelity = 1e-8;
    res.per_restart = {{7, 1e-8, 120, StopReason::Goal, 0.5},
                       {8, 3e-4, 500, StopReason::MaxIterations, 2.0}};
    const auto rows = io::rows_from_result(res, 2.5, 64, "heisenberg");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].T == 2.5);
    CHECK(rows[0].n_segments == 64);
    CHECK(rows[0].seed == 7);
    CHECK(rows[0].restart == 0);
    CHECK(rows[0].objective == "heisenberg");
    CHECK(rows[0].infidelity == 1e-8);
    CHECK(rows[0].iterations == 120);
    CHECK(rows[1].restart == 1);
    CHECK(rows[1].seed == 8);
}

TEST_CASE("config json round-trips every field") {
    io::ExperimentConfig c;
    c.rows = 2;
    c.cols = 3;
    c.boundary = Boundary::HalfPeriodic;
    c.J = 0.9;
    c.K = 0.02;
    c.flipped_link = 5;
    c.objective = "state";
    c.target = "optimized";
    c.T = 4.25;
    c.T_grid = {1.0, 2.0, 4.0};
    c.n_segments = 128;
    c.T_ad = 150.0;
    c.stage1_T = 7.0;
    c.stage1_segments = 96;
    c.restarts = 4;
    c.seed = 987654321;
    c.threshold = 1e-7;
    c.max_iterations = 777;
    c.trials = 55;
    c.segments_cap = 512;
    c.clamp_endpoints = true;
    c.out_csv = "another.csv";
    c.out_manifest = "another.json";

    const auto back = io::config_from_json(io::config_to_json(c));
    CHECK(io::config_to_json(back) == io::config_to_json(c));
}

TEST_CASE("unknown config keys are rejected by name") {
    json j = io::config_to_json(io::ExperimentConfig{});
    j["n_segmets"] = 100;  // typo should not be silently ignored
    try {
        io::config_from_json(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("n_segmets") != std::string::npos);
    }
}

TEST_CASE("config validation rejects bad values") {
    const auto base = io::config_to_json(io::ExperimentConfig{});
    auto mutate = [&](const char* key, json value) {
        json j = base;
        j[key] = std::move(value);
        return j;
    };
    CHECK_THROWS_AS(io::config_from_json(mutate("rows", 0)), ConfigError);
    CHECK_THROWS_AS(io::config_from_json(mutate("T", -1.0)), ConfigError);
    CHECK_THROWS_AS(io::config_from_json(mutate("objective", "energy")), ConfigError);
    CHECK_THROWS_AS(io::config_from_json(mutate("target", "identity")), ConfigError);
    CHECK_THROWS_AS(io::config_from_json(mutate("boundary", "twisted")), ConfigError);
    CHECK_THROWS_AS(io::config_from_json(mutate("T_grid", json::array({2.0, 1.0}))), ConfigError);
    CHECK_THROWS_AS(io::config_from_json(mutate("restarts", 0)), ConfigError);
    CHECK_THROWS_AS(io::config_from_json(json::array({1, 2, 3})), ConfigError);
}

TEST_CASE("manifest embeds the config and reloads as one") {
    io::ExperimentConfig c;
    c.rows = 1;
    c.cols = 2;
    c.T = 3.25;
    const json manifest = io::manifest_json("optimize", c, 12.5);
    CHECK(manifest.at("subcommand") == "optimize");
    CHECK(manifest.at("wall_time_s") == 12.5);
    CHECK(manifest.contains("schema"));
    CHECK(manifest.contains("version"));

    const auto path = temp_file("manifest.json");
    io::write_text(path.string(), manifest.dump(2));
    const json loaded = io::load_config_file(path.string());
    // a manifest used as --config unwraps to its config block; wall time and
    // provenance fields do not survive, by design
    const auto round = io::config_from_json(loaded);
    CHECK(round.rows == 1);
    CHECK(round.cols == 2);
    CHECK(round.T == 3.25);
    std::filesystem::remove(path);
}

TEST_CASE("load_config_file reports missing and malformed files") {
    CHECK_THROWS_AS(io::load_config_file("/nonexistent/nowhere.json"), ConfigError);
    const auto path = temp_file("broken.json");
    io::write_text(path.string(), "{not json");
    CHECK_THROWS_AS(io::load_config_file(path.string()), ConfigError);
    std::filesystem::remove(path);
}

TEST_CASE("pulses survive a json round trip") {
    Pulse p;
    p.duration = 2.75;
    p.values = {0.0, 0.31830988618367, 1.0, 0.25};
    const Pulse q = io::pulse_from_json(io::pulse_to_json(p));
    CHECK(q.duration == p.duration);
    REQUIRE(q.values.size() == p.values.size());
    for (std::size_t i = 0; i < p.values.size(); ++i) { CHECK(q.values[i] == p.values[i]); }
}

}  // TEST_SUITE
