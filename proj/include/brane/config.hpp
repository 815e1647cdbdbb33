#pragma once

// JSON run configuration (schema 1). Unknown keys and out-of-range values are
// rejected with the offending field named in the message.

#include "brane/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace brane {

struct McfSettings {
    std::vector<double> dt{4e-3, 2e-3, 1e-3};
    int substeps = 4;
    std::string shape = "graph"; // "graph" or "circle"
    double radius = 1.0;
    int circle_points = 256;
    double theta_end = 0.25;
    int outputs = 10;
    double dtheta_factor = 0.1;
};

struct RunConfig {
    SolverConfig solver;
    bool mcf_compare = false;
    McfSettings mcf;
    bool snapshots = false;
    std::uint64_t seed = 0;
    std::string output_dir = ".";
};

RunConfig parse_config(const nlohmann::json& doc);
/// Reads and parses a file; missing or malformed files raise ConfigError.
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& config);

} // namespace brane
