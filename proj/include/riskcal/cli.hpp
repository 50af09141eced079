#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "riskcal/probes.hpp"

namespace riskcal::cli {

enum ExitCode : int { kOk = 0, kGapFound = 1, kInputError = 2 };

struct RunConfig {
    /// validate | eval | lift | tc-check | cone-check | demo
    std::string command;
    /// incompatibility | multiperiod (demo only)
    std::string demo;
    std::string space_path;
    std::string utility_path;
    std::optional<std::size_t> grid_n;
    std::size_t probes = kDefaultProbeCount;
    std::uint64_t seed = kDefaultSeed;
    double tolerance = 1e-9;
    /// text (JSON) | csv
    std::string format = "text";
    std::string out_path;
    std::string x;
    std::string f;
    std::string g;
    /// cone-check: shift x by -u_{0,2}(x) first.
    bool center = false;
    /// Directory holding the shipped example inputs (demo only).
    std::string data_dir;
};

struct RunOutcome {
    int exit_code = kOk;
    std::string report;
    std::string error;
};

/// Executes one command. Never throws for input problems: they map to
/// kInputError with a diagnostic in `error`. Writes `report` to `out_path` when set.
RunOutcome run(const RunConfig& config);

/// Directory of the example inputs shipped with the sources.
std::string default_data_dir();

}  // namespace riskcal::cli
