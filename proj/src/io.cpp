#include "kitaev/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "kitaev/version.hpp"

namespace kitaev::io {

namespace {

using nlohmann::json;

auto require_known_keys(const json& j, std::initializer_list<const char*> known) -> void {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) {
            if (key == k) {
                ok = true;
                break;
            }
        }
        if (!ok) { throw ConfigError("unknown config field '" + key + "'"); }
    }
}

template <typename T>
auto get_field(const json& j, const char* key, T& out) -> void {
    if (!j.contains(key)) { return; }
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config field '") + key + "' has the wrong type");
    }
}

}  // namespace

auto csv_header() -> std::string { return "T,n_segments,seed,restart,objective,infidelity,iterations,wall_time_s"; }

auto format_double(double v) -> std::string {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

auto to_csv(const std::vector<CsvRow>& rows) -> std::string {
    std::ostringstream out;
    out << csv_header() << '\n';
    for (const CsvRow& r : rows) {
        out << format_double(r.T) << ',' << r.n_segments << ',' << r.seed << ',' << r.restart << ','
            << r.objective << ',' << format_double(r.infidelity) << ',' << r.iterations << ','
            << format_double(r.wall_time_s) << '\n';
    }
    return out.str();
}

auto rows_from_result(const OptimizationResult& result, double T, int n_segments,
                      const std::string& objective) -> std::vector<CsvRow> {
    std::vector<CsvRow> rows;
    rows.reserve(result.per_restart.size());
    for (std::size_t r = 0; r < result.per_restart.size(); ++r) {
        const RestartRecord& rec = result.per_restart[r];
        CsvRow row;
        row.T = T;
        row.n_segments = n_segments;
        row.seed = rec.seed;
        row.restart = static_cast<int>(r);
        row.objective = objective;
        row.infidelity = rec.infidelity;
        row.iterations = rec.iterations;
        row.wall_time_s = rec.wall_time_s;
        rows.push_back(std::move(row));
    }
    return rows;
}

auto write_text(const std::string& path, const std::string& content) -> void {
    std::ofstream out(path, std::ios::binary);
    if (!out) { throw ConfigError("cannot open '" + path + "' for writing"); }
    out << content;
    if (!out) { throw std::runtime_error("short write to '" + path + "'"); }
}

auto pulse_to_json(const Pulse& pulse) -> nlohmann::json {
    return json{{"duration", pulse.duration}, {"values", pulse.values}};
}

auto pulse_from_json(const nlohmann::json& j) -> Pulse {
    Pulse p;
    try {
        p.duration = j.at("duration").get<double>();
        p.values = j.at("values").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed pulse: ") + e.what());
    }
    return p;
}

auto config_to_json(const ExperimentConfig& c) -> nlohmann::json {
    return json{{"rows", c.rows},
                {"cols", c.cols},
                {"boundary", to_string(c.boundary)},
                {"J", c.J},
                {"K", c.K},
                {"flipped_link", c.flipped_link},
                {"objective", c.objective},
                {"target", c.target},
                {"T", c.T},
                {"T_grid", c.T_grid},
                {"n_segments", c.n_segments},
                {"T_ad", c.T_ad},
                {"stage1_T", c.stage1_T},
                {"stage1_segments", c.stage1_segments},
                {"restarts", c.restarts},
                {"seed", c.seed},
                {"threshold", c.threshold},
                {"max_iterations", c.max_iterations},
                {"trials", c.trials},
                {"segments_cap", c.segments_cap},
                {"clamp_endpoints", c.clamp_endpoints},
                {"out_csv", c.out_csv},
                {"out_manifest", c.out_manifest}};
}

auto config_from_json(const nlohmann::json& j, ExperimentConfig c) -> ExperimentConfig {
    if (!j.is_object()) { throw ConfigError("config root must be a JSON object"); }
    require_known_keys(j, {"rows", "cols", "boundary", "J", "K", "flipped_link", "objective", "target",
                           "T", "T_grid", "n_segments", "T_ad", "stage1_T", "stage1_segments", "restarts",
                           "seed", "threshold", "max_iterations", "trials", "segments_cap",
                           "clamp_endpoints", "out_csv", "out_manifest"});
    get_field(j, "rows", c.rows);
    get_field(j, "cols", c.cols);
    if (j.contains("boundary")) {
        std::string b;
        get_field(j, "boundary", b);
        try {
            c.boundary = boundary_from_string(b);
        } catch (const std::exception&) {
            throw ConfigError("config field 'boundary' must be open, half_periodic, or periodic");
        }
    }
    get_field(j, "J", c.J);
    get_field(j, "K", c.K);
    get_field(j, "flipped_link", c.flipped_link);
    get_field(j, "objective", c.objective);
    get_field(j, "target", c.target);
    get_field(j, "T", c.T);
    get_field(j, "T_grid", c.T_grid);
    get_field(j, "n_segments", c.n_segments);
    get_field(j, "T_ad", c.T_ad);
    get_field(j, "stage1_T", c.stage1_T);
    get_field(j, "stage1_segments", c.stage1_segments);
    get_field(j, "restarts", c.restarts);
    get_field(j, "seed", c.seed);
    get_field(j, "threshold", c.threshold);
    get_field(j, "max_iterations", c.max_iterations);
    get_field(j, "trials", c.trials);
    get_field(j, "segments_cap", c.segments_cap);
    get_field(j, "clamp_endpoints", c.clamp_endpoints);
    get_field(j, "out_csv", c.out_csv);
    get_field(j, "out_manifest", c.out_manifest);

    if (c.rows < 1 || c.cols < 1) { throw ConfigError("config fields 'rows'/'cols' must be >= 1"); }
    if (c.objective != "heisenberg" && c.objective != "state") {
        throw ConfigError("config field 'objective' must be heisenberg or state");
    }
    if (c.target != "adiabatic" && c.target != "optimized") {
        throw ConfigError("config field 'target' must be adiabatic or optimized");
    }
    if (c.T <= 0.0) { throw ConfigError("config field 'T' must be > 0"); }
    if (c.T_ad <= 0.0) { throw ConfigError("config field 'T_ad' must be > 0"); }
    if (c.n_segments < 1) { throw ConfigError("config field 'n_segments' must be >= 1"); }
    if (c.restarts < 1) { throw ConfigError("config field 'restarts' must be >= 1"); }
    if (c.threshold <= 0.0) { throw ConfigError("config field 'threshold' must be > 0"); }
    if (c.max_iterations < 1) { throw ConfigError("config field 'max_iterations' must be >= 1"); }
    if (c.trials < 1) { throw ConfigError("config field 'trials' must be >= 1"); }
    if (c.segments_cap < 1) { throw ConfigError("config field 'segments_cap' must be >= 1"); }
    if (c.stage1_T < 0.0) { throw ConfigError("config field 'stage1_T' must be >= 0"); }
    if (c.stage1_segments < 0) { throw ConfigError("config field 'stage1_segments' must be >= 0"); }
    for (std::size_t i = 0; i + 1 < c.T_grid.size(); ++i) {
        if (c.T_grid[i + 1] <= c.T_grid[i]) { throw ConfigError("config field 'T_grid' must be ascending"); }
    }
    if (!c.T_grid.empty() && c.T_grid.front() <= 0.0) {
        throw ConfigError("config field 'T_grid' entries must be > 0");
    }
    return c;
}

auto load_config_file(const std::string& path) -> nlohmann::json {
    std::ifstream in(path);
    if (!in) { throw ConfigError("cannot open config file '" + path + "'"); }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (j.is_object() && j.contains("config")) { return j.at("config"); }
    return j;
}

auto manifest_json(const std::string& subcommand, const ExperimentConfig& config, double wall_time_s)
    -> nlohmann::json {
    return json{{"schema", "kitaev-control/manifest/v1"},
                {"version", kVersion},
                {"subcommand", subcommand},
                {"config", config_to_json(config)},
                {"wall_time_s", wall_time_s}};
}

}  // namespace kitaev::io
