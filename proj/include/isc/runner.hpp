#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "isc/config.hpp"
#include "isc/simulation.hpp"

namespace isc {

/// Parsed command line of isc_sim.
struct RunOptions {
    std::optional<ScenarioKind> scenario;
    std::optional<std::filesystem::path> config;
    std::filesystem::path out = "out";
    std::vector<double> sweep_lambda_a;
    std::optional<DriverKind> driver;
    bool plot_data = false;
};

struct PlannedRun {
    std::string tag;  //!< file-name stem shared by the run's outputs
    ScenarioConfig cfg;
};

/// One PlannedRun per sweep value, or a single run for an empty sweep.
[[nodiscard]] std::vector<PlannedRun> plan_runs(const ScenarioConfig& base, const std::vector<double>& sweep_lambda_a);

/// Whitespace-separated table, one row per run.
[[nodiscard]] std::string format_summary(const std::vector<PlannedRun>& runs, const std::vector<Metrics>& metrics);

/**
 * @brief Execute a CLI invocation.
 *
 * Runs are computed concurrently and checked before anything is written.
 * On failure every file written by this call is removed again. Returns the
 * process exit status; diagnostics go to @p err, a short report to @p log.
 */
int run(const RunOptions& options, std::ostream& log, std::ostream& err);

}  // namespace isc
