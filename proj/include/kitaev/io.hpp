#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "kitaev/errors.hpp"
#include "kitaev/evolve.hpp"
#include "kitaev/grape.hpp"
#include "kitaev/lattice.hpp"

// Run records and config plumbing shared by the CLI and the bindings.
// Numbers are serialized with 17 significant digits so that re-running a
// manifest reproduces byte-identical CSV apart from the wall_time_s column.

namespace kitaev::io {

/// One CSV record: a single restart of a single optimization run.
struct CsvRow {
    double        T = 0.0;
    int           n_segments = 0;
    std::uint64_t seed = 0;
    int           restart = 0;
    std::string   objective;  ///< "heisenberg" or "state"
    double        infidelity = 0.0;
    int           iterations = 0;
    double        wall_time_s = 0.0;
};

auto csv_header() -> std::string;
auto format_double(double v) -> std::string;  ///< round-trip exact, %.17g
auto to_csv(const std::vector<CsvRow>& rows) -> std::string;

auto rows_from_result(const OptimizationResult& result, double T, int n_segments,
                      const std::string& objective) -> std::vector<CsvRow>;

auto write_text(const std::string& path, const std::string& content) -> void;

auto pulse_to_json(const Pulse& pulse) -> nlohmann::json;
auto pulse_from_json(const nlohmann::json& j) -> Pulse;

/// Everything a run needs; fully embedded in every manifest.
struct ExperimentConfig {
    int           rows = 1;
    int           cols = 1;
    Boundary      boundary = Boundary::Open;
    double        J = 1.0;
    double        K = 0.01;
    int           flipped_link = -1;        ///< -1 selects the central z-link
    std::string   objective = "heisenberg"; ///< heisenberg | state
    std::string   target = "adiabatic";     ///< adiabatic | optimized
    double        T = 3.0;
    std::vector<double> T_grid;             ///< sweep/droptime grid; may be empty
    int           n_segments = 200;
    double        T_ad = 300.0;
    double        stage1_T = 0.0;           ///< optimized target: 0 = 1.4 / delta^2
    int           stage1_segments = 0;      ///< optimized target: 0 = n_segments
    int           restarts = 5;
    std::uint64_t seed = 1;
    double        threshold = 1e-6;
    int           max_iterations = 5000;
    int           trials = 200;             ///< verify subcommand
    int           segments_cap = 1024;      ///< minsteps search cap
    bool          clamp_endpoints = false;
    std::string   out_csv;                  ///< empty = derived from subcommand
    std::string   out_manifest;
};

auto config_to_json(const ExperimentConfig& config) -> nlohmann::json;

/// Strict parse: unknown keys, wrong types, or out-of-range values raise
/// ConfigError naming the offending field. `base` supplies defaults.
auto config_from_json(const nlohmann::json& j, ExperimentConfig base = {}) -> ExperimentConfig;

/// Read a config file; accepts either a bare config object or a manifest
/// produced by an earlier run (its embedded "config" is extracted), so any
/// manifest can be re-run as-is.
auto load_config_file(const std::string& path) -> nlohmann::json;

auto manifest_json(const std::string& subcommand, const ExperimentConfig& config, double wall_time_s)
    -> nlohmann::json;

}  // namespace kitaev::io
