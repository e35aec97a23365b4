#pragma once

#include <span>

#include <Eigen/Dense>

#include "isc/vehicle.hpp"

namespace isc {

/**
 * @brief Single-input LTI model x(k+1) = a x + b u, z = c x of any size.
 *
 * The prediction layer works on this generic form so that the same code
 * serves the 4-state vehicle and the small plants used in tests.
 */
struct LinearModel {
    Eigen::MatrixXd a;  //!< nx x nx
    Eigen::VectorXd b;  //!< nx
    Eigen::MatrixXd c;  //!< ny x nx

    [[nodiscard]] static LinearModel from(const DiscreteDynamics& dyn);
    [[nodiscard]] Eigen::Index states() const { return a.rows(); }
    [[nodiscard]] Eigen::Index outputs() const { return c.rows(); }
};

/// Horizon and quadratic weights of one MPC party (N_p = N_c = N_u = horizon).
struct MpcConfig {
    int horizon = 50;
    Eigen::MatrixXd q = Eigen::Matrix2d::Identity();  //!< output-error weight, ny x ny, SPD
    double r = 1.0;                                   //!< input weight, > 0

    /// Throws std::invalid_argument if the horizon or weights are invalid.
    void validate() const;
};

/// Stacked outputs z(k+1..k+N) = phi x(k) + theta u(k..k+N-1).
struct StackedPredictor {
    int horizon = 0;
    Eigen::MatrixXd phi;    //!< (ny N) x nx, row block i = c a^(i+1)
    Eigen::MatrixXd theta;  //!< (ny N) x N, block (i, j) = c a^(i-j) b for j <= i
};

/// Prediction matrices of the adaptive driver's internal model (a replaced by a_tilde).
struct TildePredictor {
    Eigen::MatrixXd a_tilde;
    StackedPredictor stacked;
    double lambda_a = 0.0;
};

/// Constant gain mapping a stacked regressor to the optimal input sequence.
struct FeedbackGain {
    Eigen::MatrixXd k;  //!< N x (ny N)

    [[nodiscard]] int horizon() const { return static_cast<int>(k.rows()); }
    /// Row selecting the first input of the sequence.
    [[nodiscard]] auto first_row() const { return k.row(0); }
};

/**
 * @brief Reusable scratch for command evaluation.
 *
 * Single owner; results are identical to fresh allocation.
 */
struct PredictionWorkspace {
    Eigen::VectorXd r_stack;
    Eigen::VectorXd w_a;
    Eigen::VectorXd eps;
};

[[nodiscard]] StackedPredictor stack_prediction(const LinearModel& model, int horizon);
[[nodiscard]] StackedPredictor stack_prediction(const DiscreteDynamics& dyn, int horizon);

/**
 * @brief Least-squares gain pinv([lambda sqrt(Q) theta; sqrt(R)]) [sqrt(Q); 0].
 *
 * Solved through the normal equations (lambda^2 theta' Q theta + R) K = lambda theta' Q
 * with a Cholesky factorization; falls back to a complete orthogonal
 * decomposition of the stacked system if the factorization fails.
 */
[[nodiscard]] FeedbackGain synthesize_gain(const Eigen::MatrixXd& theta, const MpcConfig& cfg, double lambda);

[[nodiscard]] FeedbackGain synthesize_automation_gain(const StackedPredictor& sp, const MpcConfig& cfg);

/// Driver gain for the internal model that contains the automation's feedback.
[[nodiscard]] FeedbackGain synthesize_driver_gain(const TildePredictor& tp, const MpcConfig& cfg_d, double lambda_d);

/// a_tilde = a - lambda_a b e1' K_A phi, restacked with (a_tilde, b, c).
[[nodiscard]] TildePredictor build_tilde(const LinearModel& model, const StackedPredictor& sp,
                                         const FeedbackGain& k_a, double lambda_a);

/// Stack ny-dimensional samples into one vector; throws on length mismatch.
void stack_samples(std::span<const OutputSample> samples, Eigen::VectorXd& out);

// Generic entry points: references already stacked, state as a vector.

[[nodiscard]] double automation_command(const FeedbackGain& k_a, const StackedPredictor& sp,
                                        const Eigen::VectorXd& x, const Eigen::VectorXd& r_stack);

/**
 * @brief w_A(k+i) = e1' K_A r_A(k+1+i .. k+N+i) for i = 0..N-1.
 *
 * @p r_a_long holds 2N-1 stacked output samples r_A(k+1) .. r_A(k+2N-1).
 */
void assemble_w_a(const FeedbackGain& k_a, const Eigen::VectorXd& r_a_long, Eigen::VectorXd& w_a);
[[nodiscard]] Eigen::VectorXd assemble_w_a(const FeedbackGain& k_a, const Eigen::VectorXd& r_a_long);

/// u_D = e1' K_D (r_D - phi_tilde x - lambda_a theta_tilde w_A).
[[nodiscard]] double driver_command(const FeedbackGain& k_d, const TildePredictor& tp, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& r_d_stack, const Eigen::VectorXd& w_a,
                                    PredictionWorkspace& ws);

// Vehicle-typed conveniences.

[[nodiscard]] double automation_command(const FeedbackGain& k_a, const StackedPredictor& sp, const VehicleState& x,
                                        std::span<const OutputSample> r_window, PredictionWorkspace& ws);

void assemble_w_a(const FeedbackGain& k_a, std::span<const OutputSample> r_a_long, PredictionWorkspace& ws);

[[nodiscard]] double driver_command(const FeedbackGain& k_d, const TildePredictor& tp, const VehicleState& x,
                                    std::span<const OutputSample> r_d_window, const Eigen::VectorXd& w_a,
                                    PredictionWorkspace& ws);

}  // namespace isc
