#include "isc/authority.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace isc {

void SwitchingConfig::validate() const
{
    if (window < 1)
        throw std::invalid_argument("SwitchingConfig: window must be >= 1");
    if (!std::isfinite(delta_star) || delta_star <= 0.0)
        throw std::invalid_argument("SwitchingConfig: delta_star must be positive");
    if (!(lambda_d_low >= 0.0 && lambda_d_low < lambda_d_high && lambda_d_high <= 1.0))
        throw std::invalid_argument("SwitchingConfig: need 0 <= lambda_d_low < lambda_d_high <= 1");
    if (!std::isfinite(r_d_hat) || r_d_hat <= 0.0)
        throw std::invalid_argument("SwitchingConfig: r_d_hat must be positive");
    MpcConfig{1, q_d_hat, r_d_hat}.validate();
}

DetectorState::DetectorState(int window, AuthorityWeights initial)
    : weights_(initial)
{
    if (window < 1)
        throw std::invalid_argument("DetectorState: window must be >= 1");
    buffer_.assign(static_cast<std::size_t>(window), 0.0);
}

double DetectorState::update(double actual, double expected)
{
    const double residual = actual - expected;
    if (!std::isfinite(residual))
        throw std::invalid_argument("DetectorState: non-finite residual");

    sum_ += residual - buffer_[head_];  // evicted slot holds 0 until the buffer is full
    buffer_[head_] = residual;
    head_ = (head_ + 1) % buffer_.size();
    if (count_ < buffer_.size())
        ++count_;
    // Resynchronize once per lap so rounding drift cannot accumulate.
    if (head_ == 0)
        sum_ = std::accumulate(buffer_.begin(), buffer_.end(), 0.0);
    return delta();
}

void DetectorState::clear()
{
    std::fill(buffer_.begin(), buffer_.end(), 0.0);
    head_ = 0;
    count_ = 0;
    sum_ = 0.0;
}

std::vector<double> DetectorState::residuals() const
{
    std::vector<double> out;
    out.reserve(count_);
    const std::size_t start = count_ < buffer_.size() ? 0 : head_;
    for (std::size_t i = 0; i < count_; ++i)
        out.push_back(buffer_[(start + i) % buffer_.size()]);
    return out;
}

double expected_driver_input(const AgentBundle& estimated, const VehicleState& x,
                             std::span<const OutputSample> r_a_long, PredictionWorkspace& ws)
{
    return estimated.matched_driver_command(x, r_a_long, ws);
}

AuthorityWeights apply_rule(double delta, const SwitchingConfig& cfg)
{
    const double lambda_d = delta >= cfg.delta_star ? cfg.lambda_d_high : cfg.lambda_d_low;
    return AuthorityWeights::from_driver(lambda_d);
}

}  // namespace isc
