#pragma once

#include "levydim/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace levydim {

using Json = nlohmann::json;

/// Exponent tree from its config form: objects with a lowercase "kind" tag
/// ("isotropic_stable", "brownian_drift", "stable_subordinator", "sum",
/// "fractional_power", "product_lift", "difference_lift"). Unknown keys are
/// rejected.
ExponentExpr exponent_from_json(const Json& node);

/// Numeric knobs shared by the subcommands; everything has a default, so a
/// config only names what it changes.
struct RunParams {
    std::uint64_t seed = 1;
    double beta_tol = 0.02;
    int shell_lo = -10;
    int shell_hi = 30;
    int samples = 20000;
    int shards = 4;
    int threads = 0;
    double slope_margin = 0.25;        // standalone classification (hit)
    double probe_slope_margin = 0.04;  // beta probes inside the solver
    int tail_window = 8;
    bool cross_check = true;

    // simulation / estimation
    std::string target = "field"; // field | subordinator | saturated
    std::string format = "binary";
    int mesh_level = 16; // mesh = 2^-mesh_level
    double horizon = 1.0;
    double alpha = 0.5;
    int saturated_n = 2; // N for the saturated subordinator
    std::vector<double> t_point;
    std::uint64_t n_samples = 100000;
    double eps_c = 1.0;
    std::optional<double> eps_exponent; // default: 1/homogeneity degree
    int level_lo = 0;
    int level_hi = -1; // -1: finest level the mesh supports
    std::string estimate_mode = "zero_set"; // zero_set | multiple_times
    std::vector<std::string> inputs;
    std::optional<std::string> dim_report;

    ShellOptions shell_options() const;
    SolveOptions solve_options() const;
};

struct RunConfig {
    Json raw; // canonical form; emit() round-trips through it
    std::optional<DimensionProblem> problem;
    RunParams params;
    HypothesisFlags hypothesis_flags;
    std::filesystem::path out_dir = "out";

    static RunConfig parse(const Json& j);
    static RunConfig parse_file(const std::filesystem::path& path);

    /// Canonical serialization; parse(emit()) == emit() by construction.
    std::string emit() const;
    std::uint64_t config_hash() const;
};

} // namespace levydim
