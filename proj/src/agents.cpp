#include "isc/agents.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace isc {

void AuthorityWeights::validate() const
{
    if (!std::isfinite(lambda_d) || !std::isfinite(lambda_a) || lambda_d < 0.0 || lambda_a < 0.0)
        throw std::invalid_argument("AuthorityWeights: weights must be non-negative");
    if (std::abs(lambda_d + lambda_a - 1.0) > 1e-12)
        throw std::invalid_argument(
            fmt::format("AuthorityWeights: lambda_d + lambda_a must equal 1 (got {} + {})", lambda_d, lambda_a));
}

double blend(double u_d, double u_a, const AuthorityWeights& w)
{
    return w.lambda_d * u_d + w.lambda_a * u_a;
}

namespace {

template <class Shared>
std::shared_ptr<const Shared> make_shared_part(const DiscreteDynamics& dyn, const MpcConfig& automation,
                                               const MpcConfig& driver)
{
    automation.validate();
    driver.validate();
    if (automation.horizon != driver.horizon)
        throw std::invalid_argument("AgentBundle: driver and automation must share the horizon");

    auto shared = std::make_shared<Shared>();
    shared->dyn = dyn;
    shared->model = LinearModel::from(dyn);
    shared->automation = automation;
    shared->driver = driver;
    shared->predictor = stack_prediction(shared->model, automation.horizon);
    shared->k_a = synthesize_automation_gain(shared->predictor, automation);
    shared->k_manual = synthesize_gain(shared->predictor.theta, driver, 1.0);
    return shared;
}

}  // namespace

AgentBundle::AgentBundle(const DiscreteDynamics& dyn, const MpcConfig& automation, const MpcConfig& driver,
                         const AuthorityWeights& weights, DriverKind kind)
    : AgentBundle(make_shared_part<Shared>(dyn, automation, driver), weights, kind)
{
}

AgentBundle::AgentBundle(std::shared_ptr<const Shared> shared, const AuthorityWeights& weights, DriverKind kind)
    : shared_(std::move(shared)), weights_(weights), kind_(kind)
{
    weights_.validate();
    tilde_ = build_tilde(shared_->model, shared_->predictor, shared_->k_a, weights_.lambda_a);
    k_d_ = synthesize_driver_gain(tilde_, shared_->driver, weights_.lambda_d);
}

AgentBundle AgentBundle::rebuild_for_weights(const AuthorityWeights& weights) const
{
    return AgentBundle(shared_, weights, kind_);
}

AgentCommands AgentBundle::step(const VehicleState& x, std::span<const OutputSample> r_d_window,
                                std::span<const OutputSample> r_a_long, PredictionWorkspace& ws) const
{
    const int n = horizon();
    if (static_cast<int>(r_d_window.size()) != n)
        throw std::invalid_argument(fmt::format("agent step: driver window has {} samples, expected {}",
                                                r_d_window.size(), n));
    if (static_cast<int>(r_a_long.size()) != 2 * n - 1)
        throw std::invalid_argument(fmt::format("agent step: automation window has {} samples, expected {}",
                                                r_a_long.size(), 2 * n - 1));
    if (tilde_.lambda_a != weights_.lambda_a)
        throw std::logic_error("agent step: driver gain synthesized for different weights");

    AgentCommands cmd;
    cmd.u_a = automation_command(shared_->k_a, shared_->predictor, x, r_a_long.first(n), ws);
    if (kind_ == DriverKind::adaptive) {
        assemble_w_a(shared_->k_a, r_a_long, ws);
        cmd.u_d = driver_command(k_d_, tilde_, x, r_d_window, ws.w_a, ws);
    } else {
        stack_samples(r_d_window, ws.r_stack);
        cmd.u_d = automation_command(shared_->k_manual, shared_->predictor, Eigen::VectorXd(x.vector()), ws.r_stack);
    }
    cmd.u = blend(cmd.u_d, cmd.u_a, weights_);
    return cmd;
}

double AgentBundle::matched_driver_command(const VehicleState& x, std::span<const OutputSample> r_a_long,
                                           PredictionWorkspace& ws) const
{
    const int n = horizon();
    if (static_cast<int>(r_a_long.size()) != 2 * n - 1)
        throw std::invalid_argument(fmt::format("expected driver input: automation window has {} samples, expected {}",
                                                r_a_long.size(), 2 * n - 1));
    assemble_w_a(shared_->k_a, r_a_long, ws);
    return driver_command(k_d_, tilde_, x, r_a_long.first(n), ws.w_a, ws);
}

}  // namespace isc
