#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "virialbound/potentials.hpp"

namespace vb::cli {

enum ExitCode : int {
    kSuccess = 0,
    kValidationError = 1,
    kCounterexample = 2,
    kCapacityError = 3,
};

// One run of one command. Values come from the JSON config file and are then
// overridden by command-line flags.
struct RunConfig {
    std::optional<nlohmann::json> potential;
    std::vector<double> betas;
    std::vector<int> n;  // mayer: first entry; stability: every entry
    double box_side = 20.0;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    int starts = 16;
    std::string out;
    std::string format = "csv";
    unsigned workers = 1;
    // verify
    int n_max = 5;
    int trials = 200;
    int orders = 100;
    int orders_n6 = 5;
    // stability
    int check_trials = 10000;
    // gfun
    double u_min = 1e-2;
    double u_max = 1e8;
    int u_count = 21;
    int x_count = 21;
};

// Builds a potential from {"kind": "lennard_jones" | "hard_sphere" |
// "square_well" | "tabulated", ...}. Throws InvalidInput on bad descriptions.
[[nodiscard]] PairPotential potential_from_json(const nlohmann::json& desc);

// Parses a config document; unknown keys are rejected.
[[nodiscard]] RunConfig config_from_json(const nlohmann::json& doc);
[[nodiscard]] RunConfig load_config(const std::string& path);

// beta: number, list, or {"start", "stop", "count", "spacing": "linear"|"log"}.
[[nodiscard]] std::vector<double> parse_betas(const nlohmann::json& value);

struct CommandResult {
    int exit_code = kSuccess;
    std::string report;       // CSV or JSON document; empty on validation errors
    std::string diagnostics;  // human-readable notes for stderr
};

[[nodiscard]] CommandResult cmd_radii(const RunConfig& cfg);
[[nodiscard]] CommandResult cmd_verify(const RunConfig& cfg);
[[nodiscard]] CommandResult cmd_mayer(const RunConfig& cfg);
[[nodiscard]] CommandResult cmd_stability(const RunConfig& cfg);
[[nodiscard]] CommandResult cmd_gfun(const RunConfig& cfg);

// Dispatches on the command name ("radii", "verify", ...).
[[nodiscard]] CommandResult run_command(const std::string& command, const RunConfig& cfg);

// 17 significant digits; "inf", "-inf", "nan" for non-finite values.
[[nodiscard]] std::string format_number(double v);

}  // namespace vb::cli
