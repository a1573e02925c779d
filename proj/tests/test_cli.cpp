#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
    int         exit_code = -1;
    std::string output;
};

/// Runs the built binary inside a scratch directory so default output files
/// stay out of the build tree.
auto run_cli(const std::string& args) -> CliRun {
    static int counter = 0;
    const fs::path dir =
        fs::temp_directory_path() / ("kitaev_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path out = dir / ("run_" + std::to_string(counter++) + ".out");
    const std::string cmd = "cd " + dir.string() + " && " + std::string(KITAEV_CLI_PATH) + " " +
                            args + " > " + out.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());

    CliRun r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(out);
    std::ostringstream text;
    text << in.rdbuf();
    r.output = text.str();
    return r;
}

auto scratch_path(const std::string& name) -> std::string {
    const fs::path dir =
        fs::temp_directory_path() / ("kitaev_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return (dir / name).string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help and version exit cleanly") {
    CHECK(run_cli("--help").exit_code == 0);
    const auto v = run_cli("--version");
    CHECK(v.exit_code == 0);
    CHECK(!v.output.empty());
}

TEST_CASE("gaps reports the analytic single-plaquette value") {
    const auto r = run_cli("gaps --K 0 --out-csv " + scratch_path("g.csv") + " --out-manifest " +
                           scratch_path("g.json"));
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(std::abs(j.at("delta").get<double>() - 0.5358983848622454) <= 1e-9);
    CHECK(j.at("adiabatic_timescale").get<double>() ==
          doctest::Approx(1.0 / (0.5358983848622454 * 0.5358983848622454)).epsilon(1e-6));
}

TEST_CASE("bad input exits with the config-error code") {
    CHECK(run_cli("lattice --rows 0").exit_code == 1);
    CHECK(run_cli("optimize --objective energy").exit_code == 1);
    CHECK(run_cli("droptime").exit_code == 1);  // a grid is required
    CHECK(run_cli("--no-such-flag").exit_code == 1);
    CHECK(run_cli("gaps --config /nonexistent.json").exit_code == 1);
}

TEST_CASE("oversized verification exits with the resource-guard code") {
    CHECK(run_cli("verify --rows 3 --cols 3").exit_code == 3);
}

TEST_CASE("optimize writes the documented csv and manifest") {
    const std::string csv = scratch_path("opt.csv");
    const std::string man = scratch_path("opt.json");
    const auto r = run_cli("optimize --K 0 --T 2.0 --n-segments 8 --restarts 2 --max-iterations 40"
                           " --seed 7 --T-ad 40 --out-csv " +
                           csv + " --out-manifest " + man);
    REQUIRE(r.exit_code == 0);

    const json report = json::parse(r.output);
    CHECK(report.at("best_infidelity").is_number());
    CHECK(report.at("per_restart").size() == 2);
    CHECK(report.at("best_pulse").at("values").size() == 8);

    std::ifstream in(csv);
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "T,n_segments,seed,restart,objective,infidelity,iterations,wall_time_s");
    int rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty()) { ++rows; }
    }
    CHECK(rows == 2);

    std::ifstream min(man);
    REQUIRE(min.good());
    const json manifest = json::parse(min);
    CHECK(manifest.at("subcommand") == "optimize");
    CHECK(manifest.at("config").at("T") == 2.0);
    CHECK(manifest.at("config").at("n_segments") == 8);

    // a manifest is valid --config input for a follow-up run
    const auto rerun = run_cli("optimize --config " + man + " --max-iterations 5 --out-csv " +
                               scratch_path("opt2.csv") + " --out-manifest " +
                               scratch_path("opt2.json"));
    CHECK(rerun.exit_code == 0);
}

TEST_CASE("lattice subcommand emits coherent counts") {
    const auto r = run_cli("lattice --rows 1 --cols 2 --out-csv " + scratch_path("lat.csv") +
                           " --out-manifest " + scratch_path("lat.json"));
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(j.at("n_sites") == 10);
    CHECK(j.at("n_links") == 11);
    CHECK(j.at("n_plaquettes") == 2);
}

TEST_CASE("verify passes on the single-plaquette lattice") {
    const auto r = run_cli("verify --trials 2 --seed 3 --out-csv " + scratch_path("v.csv") +
                           " --out-manifest " + scratch_path("v.json"));
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(j.at("all_pass") == true);
}

}  // TEST_SUITE
