#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "isc/agents.hpp"

namespace isc {

/// Parameters of the sliding-window intent detector and the two-level weight rule.
struct SwitchingConfig {
    int window = 50;              //!< H [steps]
    double delta_star = 0.1;      //!< threshold [rad]
    double lambda_d_high = 0.7;   //!< driver weight when intentions diverge
    double lambda_d_low = 0.3;    //!< driver weight when intentions match
    Eigen::Matrix2d q_d_hat = Eigen::Vector2d(0.028, 0.015).asDiagonal();
    double r_d_hat = 0.04;
    bool clear_on_switch = false;  //!< drop the residual history when the weights change

    void validate() const;
};

/**
 * @brief Ring buffer of the last H residuals between actual and expected driver input.
 *
 * delta(k) = |sum of buffered residuals| / H, always divided by H even
 * while the buffer is still filling.
 */
class DetectorState {
public:
    explicit DetectorState(int window, AuthorityWeights initial = {});

    /// Push u_actual - u_expected, evict beyond H, return delta(k).
    double update(double actual, double expected);

    void clear();

    [[nodiscard]] double sum() const { return sum_; }
    [[nodiscard]] std::size_t size() const { return count_; }
    [[nodiscard]] int window() const { return static_cast<int>(buffer_.size()); }
    [[nodiscard]] double delta() const { return std::abs(sum_) / static_cast<double>(buffer_.size()); }
    /// Buffered residuals, oldest first.
    [[nodiscard]] std::vector<double> residuals() const;

    [[nodiscard]] const AuthorityWeights& weights() const { return weights_; }
    void set_weights(const AuthorityWeights& w) { weights_ = w; }

private:
    std::vector<double> buffer_;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
    double sum_ = 0.0;
    AuthorityWeights weights_;
};

/// Expected driver input under matched intention: the estimated driver model fed r_D := r_A.
[[nodiscard]] double expected_driver_input(const AgentBundle& estimated, const VehicleState& x,
                                           std::span<const OutputSample> r_a_long, PredictionWorkspace& ws);

/// delta >= delta* gives (lambda_d_high, 1 - lambda_d_high); otherwise (lambda_d_low, 1 - lambda_d_low).
[[nodiscard]] AuthorityWeights apply_rule(double delta, const SwitchingConfig& cfg);

}  // namespace isc
