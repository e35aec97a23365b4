#include "isc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace isc {

ScenarioConfig ScenarioConfig::defaults(ScenarioKind kind)
{
    ScenarioConfig cfg;
    cfg.kind = kind;
    switch (kind) {
    case ScenarioKind::path_following:
        break;
    case ScenarioKind::obstacle_avoidance:
        cfg.q_d = Eigen::Vector2d(36.0, 20.0).asDiagonal();
        break;
    case ScenarioKind::combined:
        cfg.duration = 20.0;
        cfg.switching = true;
        cfg.path.change_start = 10.0;
        cfg.initial_weights = AuthorityWeights::from_driver(cfg.switching_cfg.lambda_d_low);
        break;
    }
    return cfg;
}

std::size_t ScenarioConfig::steps() const
{
    return static_cast<std::size_t>(std::llround(duration / t_s));
}

void ScenarioConfig::validate() const
{
    vehicle.validate();
    if (!std::isfinite(t_s) || t_s <= 0.0)
        throw std::invalid_argument("ScenarioConfig: sample_time must be positive");
    if (!std::isfinite(duration) || duration <= 0.0)
        throw std::invalid_argument("ScenarioConfig: duration must be positive");
    const double ratio = duration / t_s;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument("ScenarioConfig: duration must be an integer number of sample periods");
    automation_mpc().validate();
    driver_mpc().validate();
    if (steps() < 2 * static_cast<std::size_t>(horizon))
        throw std::invalid_argument(
            fmt::format("ScenarioConfig: {} steps is shorter than twice the horizon ({})", steps(), 2 * horizon));
    initial_weights.validate();
    path.validate();
    if (switching) {
        switching_cfg.validate();
        if (switching_cfg.window > static_cast<int>(steps()))
            throw std::invalid_argument("ScenarioConfig: switching window longer than the run");
    }
}

bool operator==(const ScenarioConfig& l, const ScenarioConfig& r)
{
    const auto& ls = l.switching_cfg;
    const auto& rs = r.switching_cfg;
    return l.kind == r.kind && l.duration == r.duration && l.vehicle == r.vehicle && l.t_s == r.t_s &&
           l.horizon == r.horizon && l.q_a == r.q_a && l.r_a == r.r_a && l.q_d == r.q_d && l.r_d == r.r_d &&
           l.initial_weights == r.initial_weights && l.driver == r.driver && l.switching == r.switching &&
           ls.window == rs.window && ls.delta_star == rs.delta_star && ls.lambda_d_high == rs.lambda_d_high &&
           ls.lambda_d_low == rs.lambda_d_low && ls.q_d_hat == rs.q_d_hat && ls.r_d_hat == rs.r_d_hat &&
           ls.clear_on_switch == rs.clear_on_switch && l.path == r.path;
}

std::pair<ReferencePath, ReferencePath> make_references(const ScenarioConfig& cfg)
{
    const std::size_t samples = cfg.steps() + 2 * static_cast<std::size_t>(cfg.horizon);
    const double u = cfg.vehicle.u_long;
    return {make_reference(cfg.kind, Provenance::automation, cfg.path, u, cfg.t_s, samples),
            make_reference(cfg.kind, Provenance::driver, cfg.path, u, cfg.t_s, samples)};
}

ScenarioResult run_scenario(const ScenarioConfig& cfg)
{
    cfg.validate();
    const DiscreteDynamics dyn = discretize(build_continuous(cfg.vehicle), cfg.t_s);
    auto [automation_ref, driver_ref] = make_references(cfg);

    const auto n = static_cast<std::size_t>(cfg.horizon);
    AgentBundle agents(dyn, cfg.automation_mpc(), cfg.driver_mpc(), cfg.initial_weights, cfg.driver);
    std::optional<AgentBundle> estimated;
    std::optional<DetectorState> detector;
    if (cfg.switching) {
        estimated.emplace(dyn, cfg.automation_mpc(), cfg.estimated_driver_mpc(), cfg.initial_weights,
                          DriverKind::adaptive);
        detector.emplace(cfg.switching_cfg.window, cfg.initial_weights);
    }

    // Initial state on the reference: heading and offset match, no lateral motion.
    const OutputSample start = automation_ref.at(0);
    VehicleState x{0.0, 0.0, start.y, start.psi};

    ScenarioResult result{{cfg.t_s, {}}, {}, automation_ref, driver_ref};
    auto& rows = result.trace.rows;
    const std::size_t steps = cfg.steps();
    rows.reserve(steps);

    PredictionWorkspace ws;
    std::vector<OutputSample> r_d_window;
    std::vector<OutputSample> r_a_long;
    for (std::size_t k = 0; k < steps; ++k) {
        driver_ref.window(k + 1, n, r_d_window);
        automation_ref.window(k + 1, 2 * n - 1, r_a_long);

        const AgentCommands cmd = agents.step(x, r_d_window, r_a_long, ws);

        TraceRow row;
        row.k = k;
        row.t = static_cast<double>(k) * cfg.t_s;
        row.x = x;
        row.u_d = cmd.u_d;
        row.u_a = cmd.u_a;
        row.u = cmd.u;
        row.weights = agents.weights();
        row.r_d = driver_ref.at(k);
        row.r_a = automation_ref.at(k);

        if (detector) {
            row.u_d_hat = expected_driver_input(*estimated, x, r_a_long, ws);
            row.delta = detector->update(cmd.u_d, row.u_d_hat);
            const AuthorityWeights next = apply_rule(row.delta, cfg.switching_cfg);
            if (next.lambda_d != agents.weights().lambda_d) {
                agents = agents.rebuild_for_weights(next);
                estimated = estimated->rebuild_for_weights(next);
                detector->set_weights(next);
                if (cfg.switching_cfg.clear_on_switch)
                    detector->clear();
            }
        }
        rows.push_back(row);

        x = step(dyn, x, cmd.u);
        if (!x.finite() || x.vector().cwiseAbs().maxCoeff() > 1e9)
            throw std::runtime_error(fmt::format("run_scenario: state diverged at step {}", k));
    }

    result.metrics = compute_metrics(result.trace, driver_ref);
    return result;
}

std::optional<std::size_t> first_switch(const SimTrace& trace, std::size_t from)
{
    for (std::size_t k = std::max<std::size_t>(from, 1); k < trace.rows.size(); ++k)
        if (trace.rows[k].weights.lambda_d != trace.rows[k - 1].weights.lambda_d)
            return k;
    return std::nullopt;
}

std::optional<std::size_t> first_divergence(const SimTrace& trace)
{
    for (std::size_t k = 0; k < trace.rows.size(); ++k)
        if (trace.rows[k].r_d != trace.rows[k].r_a)
            return k;
    return std::nullopt;
}

Metrics compute_metrics(const SimTrace& trace, const ReferencePath& reference)
{
    if (trace.rows.empty())
        throw std::invalid_argument("compute_metrics: empty trace");

    Metrics m;
    double sum_y = 0.0;
    double sum_psi = 0.0;
    double sum_u = 0.0;
    for (const auto& row : trace.rows) {
        const OutputSample& r = reference.at(row.k);
        sum_y += (row.x.y - r.y) * (row.x.y - r.y);
        sum_psi += (row.x.psi - r.psi) * (row.x.psi - r.psi);
        sum_u += row.u_d * row.u_d;
        m.peak_u_d = std::max(m.peak_u_d, std::abs(row.u_d));
    }
    const auto count = static_cast<double>(trace.rows.size());
    m.rms_y_err = std::sqrt(sum_y / count);
    m.rms_psi_err = std::sqrt(sum_psi / count);
    m.rms_u_d = std::sqrt(sum_u / count);

    for (std::size_t k = 1; k < trace.rows.size(); ++k)
        if (trace.rows[k].weights.lambda_d != trace.rows[k - 1].weights.lambda_d)
            ++m.switches;

    if (const auto diverge = first_divergence(trace)) {
        if (const auto sw = first_switch(trace, *diverge))
            m.latency = static_cast<double>(*sw - *diverge) * trace.t_s;
    }
    return m;
}

std::optional<std::string> check_trace(const SimTrace& trace, const DiscreteDynamics& dyn)
{
    for (std::size_t k = 0; k < trace.rows.size(); ++k) {
        const auto& row = trace.rows[k];
        const double blended = blend(row.u_d, row.u_a, row.weights);
        if (std::abs(row.u - blended) > 1e-12)
            return fmt::format("row {}: u = {} but lambda_D u_D + lambda_A u_A = {}", k, row.u, blended);
        if (k + 1 < trace.rows.size()) {
            const Vector4 predicted = dyn.a * row.x.vector() + dyn.b * row.u;
            const Vector4 actual = trace.rows[k + 1].x.vector();
            const double scale = std::max(1.0, predicted.cwiseAbs().maxCoeff());
            if ((predicted - actual).cwiseAbs().maxCoeff() > 1e-10 * scale)
                return fmt::format("row {}: state does not follow x(k+1) = A x(k) + B u(k)", k + 1);
        }
    }
    return std::nullopt;
}

void write_trace_csv(std::ostream& os, const SimTrace& trace)
{
    os << "k,t,v,omega,y,psi,u_D,u_D_hat,u_A,u,lambda_D,lambda_A,delta,r_D_y,r_D_psi,r_A_y,r_A_psi\n";
    for (const auto& r : trace.rows) {
        fmt::print(os, "{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},"
                       "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                   r.k, r.t, r.x.v, r.x.omega, r.x.y, r.x.psi, r.u_d, r.u_d_hat, r.u_a, r.u, r.weights.lambda_d,
                   r.weights.lambda_a, r.delta, r.r_d.y, r.r_d.psi, r.r_a.y, r.r_a.psi);
    }
}

}  // namespace isc
