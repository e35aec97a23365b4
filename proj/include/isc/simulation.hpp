#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "isc/agents.hpp"
#include "isc/authority.hpp"
#include "isc/reference.hpp"
#include "isc/vehicle.hpp"

namespace isc {

/// Everything needed to reproduce one closed-loop run.
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::path_following;
    double duration = 10.0;  //!< [s]
    VehicleParams vehicle;
    double t_s = 0.02;
    int horizon = 50;
    Eigen::Matrix2d q_a = Eigen::Vector2d(1.5, 0.6).asDiagonal();
    double r_a = 0.1;
    Eigen::Matrix2d q_d = Eigen::Vector2d(0.036, 0.02).asDiagonal();  //!< true driver weight
    double r_d = 0.04;
    AuthorityWeights initial_weights;
    DriverKind driver = DriverKind::adaptive;
    bool switching = false;
    SwitchingConfig switching_cfg;
    PathShape path;

    /// Defaults for a scenario: durations, driver weight variant and switching.
    [[nodiscard]] static ScenarioConfig defaults(ScenarioKind kind);

    [[nodiscard]] std::size_t steps() const;
    [[nodiscard]] MpcConfig automation_mpc() const { return {horizon, q_a, r_a}; }
    [[nodiscard]] MpcConfig driver_mpc() const { return {horizon, q_d, r_d}; }
    [[nodiscard]] MpcConfig estimated_driver_mpc() const
    {
        return {horizon, switching_cfg.q_d_hat, switching_cfg.r_d_hat};
    }

    /// Throws std::invalid_argument naming the violated invariant.
    void validate() const;
};

[[nodiscard]] bool operator==(const ScenarioConfig& lhs, const ScenarioConfig& rhs);

struct TraceRow {
    std::size_t k = 0;
    double t = 0.0;
    VehicleState x;
    double u_d = 0.0;
    double u_d_hat = 0.0;
    double u_a = 0.0;
    double u = 0.0;
    AuthorityWeights weights;
    double delta = 0.0;
    OutputSample r_d;
    OutputSample r_a;
};

struct SimTrace {
    double t_s = 0.0;
    std::vector<TraceRow> rows;
};

struct Metrics {
    double rms_y_err = 0.0;    //!< [m]
    double rms_psi_err = 0.0;  //!< [rad]
    double rms_u_d = 0.0;      //!< [rad]
    double peak_u_d = 0.0;     //!< [rad]
    std::optional<double> latency;  //!< [s], set when a switch follows a reference divergence
    int switches = 0;
};

struct ScenarioResult {
    SimTrace trace;
    Metrics metrics;
    ReferencePath automation_ref;
    ReferencePath driver_ref;
};

/// Automation and driver reference paths for a configuration, sampled with 2N lookahead.
[[nodiscard]] std::pair<ReferencePath, ReferencePath> make_references(const ScenarioConfig& cfg);

/**
 * @brief Run the plant / agents / detector loop.
 *
 * Deterministic. A weight change decided at step k acts from step k+1.
 * Throws std::runtime_error with the step index if the state diverges.
 */
[[nodiscard]] ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// RMS errors against @p reference, driver effort, switch count and detection latency.
[[nodiscard]] Metrics compute_metrics(const SimTrace& trace, const ReferencePath& reference);

/// Index of the first row whose weights differ from the previous row.
[[nodiscard]] std::optional<std::size_t> first_switch(const SimTrace& trace, std::size_t from = 1);
/// Index of the first row where the two references differ.
[[nodiscard]] std::optional<std::size_t> first_divergence(const SimTrace& trace);

/**
 * @brief Re-check the blend identity (1e-12) and the dynamics identity (1e-10).
 *
 * Returns a description of the first violation, or nothing.
 */
[[nodiscard]] std::optional<std::string> check_trace(const SimTrace& trace, const DiscreteDynamics& dyn);

/// CSV with header k,t,v,omega,y,psi,u_D,u_D_hat,u_A,u,lambda_D,lambda_A,delta,r_D_y,r_D_psi,r_A_y,r_A_psi.
void write_trace_csv(std::ostream& os, const SimTrace& trace);

}  // namespace isc
