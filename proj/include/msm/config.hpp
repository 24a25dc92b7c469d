#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "msm/errors.hpp"

namespace msm {

// One run of the harness: which scenario, at which perturbation strengths,
// where the artifacts go. Absent eps falls back to the scenario's default
// list; an explicitly empty list runs nothing and reports success.
struct ExperimentConfig {
    std::string scenario;
    std::optional<std::vector<double>> eps;
    std::string out_dir;                // empty: out/<scenario>
    unsigned seed = 12345;              // sampled property checks only
    std::optional<double> tol;          // scenario-specific accuracy target
    std::optional<std::size_t> grid_n;  // reference grid override (PDE scenarios)
};

inline const std::vector<std::string>& registered_scenarios() {
    static const std::vector<std::string> ids{
        "roots-table",   "euler-figure",        "damped-table",
        "duffing-figures", "kg-packet",         "fourth-order-packet",
        "phase-matched-pair", "maxwell-te",     "bench-speedup"};
    return ids;
}

inline bool scenario_registered(const std::string& id) {
    for (const auto& s : registered_scenarios())
        if (s == id)
            return true;
    return false;
}

inline void validate_config(const ExperimentConfig& cfg) {
    if (!scenario_registered(cfg.scenario))
        throw ConfigError("unknown scenario '" + cfg.scenario + "'");
    if (cfg.eps)
        for (double e : *cfg.eps)
            if (!(e > 0.0) || e > 0.5)
                throw ConfigError("eps values must lie in (0, 0.5]");
    if (cfg.tol && !(*cfg.tol > 0.0))
        throw ConfigError("tol must be positive");
    if (cfg.grid_n) {
        const std::size_t n = *cfg.grid_n;
        if (n == 0 || (n & (n - 1)) != 0)
            throw ConfigError("grid_n must be a power of two");
    }
}

// JSON file with the same field names as ExperimentConfig. Unknown keys are
// rejected so a typo cannot silently fall back to a default.
inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file)
        throw ConfigError("cannot open config file " + path.string());

    nlohmann::json j;
    try {
        file >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config root must be a JSON object");

    ExperimentConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "scenario")
                cfg.scenario = value.get<std::string>();
            else if (key == "eps")
                cfg.eps = value.get<std::vector<double>>();
            else if (key == "out")
                cfg.out_dir = value.get<std::string>();
            else if (key == "seed")
                cfg.seed = value.get<unsigned>();
            else if (key == "tol")
                cfg.tol = value.get<double>();
            else if (key == "grid_n")
                cfg.grid_n = value.get<std::size_t>();
            else
                throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config type error in " + path.string() + ": " + e.what());
    }
    return cfg;
}

inline std::string resolved_out_dir(const ExperimentConfig& cfg) {
    return cfg.out_dir.empty() ? "out/" + cfg.scenario : cfg.out_dir;
}

} // namespace msm
