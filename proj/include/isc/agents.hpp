#pragma once

#include <memory>
#include <span>

#include "isc/predictor.hpp"
#include "isc/vehicle.hpp"

namespace isc {

/// Blending weights on the driver and automation inputs; non-negative, summing to one.
struct AuthorityWeights {
    double lambda_d = 0.3;
    double lambda_a = 0.7;

    [[nodiscard]] static AuthorityWeights from_driver(double lambda_d) { return {lambda_d, 1.0 - lambda_d}; }
    void validate() const;

    bool operator==(const AuthorityWeights&) const = default;
};

enum class DriverKind {
    adaptive,      //!< internal model includes the automation's feedback and the blending
    conventional,  //!< plans as if driving manually
};

[[nodiscard]] double blend(double u_d, double u_a, const AuthorityWeights& w);

struct AgentCommands {
    double u_d = 0.0;
    double u_a = 0.0;
    double u = 0.0;
};

/**
 * @brief Automation controller plus driver model, synthesized for one set of weights.
 *
 * Immutable. The driver gain and tilde predictor always correspond to
 * weights(); use rebuild_for_weights() to obtain a bundle for other weights.
 */
class AgentBundle {
public:
    AgentBundle(const DiscreteDynamics& dyn, const MpcConfig& automation, const MpcConfig& driver,
                const AuthorityWeights& weights, DriverKind kind);

    [[nodiscard]] AgentBundle rebuild_for_weights(const AuthorityWeights& weights) const;

    /**
     * @brief One control step.
     *
     * @param r_d_window driver reference r_D(k+1) .. r_D(k+N)
     * @param r_a_long   automation reference r_A(k+1) .. r_A(k+2N-1)
     */
    [[nodiscard]] AgentCommands step(const VehicleState& x, std::span<const OutputSample> r_d_window,
                                     std::span<const OutputSample> r_a_long, PredictionWorkspace& ws) const;

    /// Adaptive driver command with r_D := first N samples of r_a_long (matched intention).
    [[nodiscard]] double matched_driver_command(const VehicleState& x, std::span<const OutputSample> r_a_long,
                                                PredictionWorkspace& ws) const;

    [[nodiscard]] const AuthorityWeights& weights() const { return weights_; }
    [[nodiscard]] DriverKind driver_kind() const { return kind_; }
    [[nodiscard]] int horizon() const { return shared_->predictor.horizon; }
    [[nodiscard]] const StackedPredictor& predictor() const { return shared_->predictor; }
    [[nodiscard]] const FeedbackGain& automation_gain() const { return shared_->k_a; }
    [[nodiscard]] const FeedbackGain& manual_gain() const { return shared_->k_manual; }
    [[nodiscard]] const TildePredictor& tilde() const { return tilde_; }
    [[nodiscard]] const FeedbackGain& driver_gain() const { return k_d_; }
    [[nodiscard]] const MpcConfig& driver_config() const { return shared_->driver; }

private:
    // Weight-independent part, shared between rebuilt bundles.
    struct Shared {
        DiscreteDynamics dyn;
        LinearModel model;
        MpcConfig automation;
        MpcConfig driver;
        StackedPredictor predictor;
        FeedbackGain k_a;
        FeedbackGain k_manual;  //!< driver gain at lambda_d = 1, lambda_a = 0
    };

    AgentBundle(std::shared_ptr<const Shared> shared, const AuthorityWeights& weights, DriverKind kind);

    std::shared_ptr<const Shared> shared_;
    AuthorityWeights weights_;
    DriverKind kind_;
    TildePredictor tilde_;
    FeedbackGain k_d_;
};

}  // namespace isc
