#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mfl/experiments.hpp"

namespace mfl {

inline constexpr std::uint64_t kDefaultGridMax = 10'000'000;
inline constexpr std::uint64_t kLargeGridMax = 100'000'000;

/// One entry of the experiment list. Params are kept as raw json and
/// validated by parse_config before anything is sieved.
struct ExperimentSpec {
    std::string id;
    std::string kind;  // davenport snmv chowla two_point mrt fwlg short_interval rotation
    nlohmann::json params = nlohmann::json::object();
    std::vector<std::uint64_t> grid;
};

struct RunConfig {
    std::vector<ExperimentSpec> experiments;
    std::vector<std::uint64_t> grid{100'000, 1'000'000, 10'000'000};
    std::filesystem::path output_dir = "reports";
    std::optional<std::filesystem::path> cache_dir;
    unsigned workers = 0;  // 0 keeps the current setting
    std::optional<std::filesystem::path> golden;
    bool large_grid = false;
};

/// Throws Error(config) on anything malformed.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Evaluates one experiment over its grid; runtime and checksum included.
ExperimentReport run_experiment(const ExperimentSpec& spec, SieveProvider& sieves);

struct GoldenCheck {
    bool pass = true;
    std::vector<std::string> failures;
};

/// Golden entry per id: {"values": [{"N", "re", "im"}], "tolerance",
/// "max_abs_final", "endpoint_decrease"}; every field optional.
GoldenCheck check_golden(const ExperimentReport& report, const nlohmann::json& entry);

enum ExitCode : int { exit_ok = 0, exit_tolerance = 1, exit_config = 2, exit_cache = 3 };

struct RunOutcome {
    int exit_code = exit_ok;
    std::vector<ExperimentReport> reports;
    std::vector<std::string> messages;
};

/// Runs every experiment, writes <output_dir>/<id>.json, compares against
/// the golden file if one is configured. Never throws.
RunOutcome run(const RunConfig& config);

/// Report serialised the way run() writes it.
std::string report_text(const ExperimentReport& report);

}  // namespace mfl
