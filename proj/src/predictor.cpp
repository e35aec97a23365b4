#include "isc/predictor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace isc {

LinearModel LinearModel::from(const DiscreteDynamics& dyn)
{
    return {dyn.a, dyn.b, dyn.c};
}

void MpcConfig::validate() const
{
    if (horizon < 1)
        throw std::invalid_argument("MpcConfig: horizon must be >= 1");
    if (!std::isfinite(r) || r <= 0.0)
        throw std::invalid_argument("MpcConfig: input weight r must be positive");
    if (q.rows() != q.cols() || q.rows() == 0)
        throw std::invalid_argument("MpcConfig: q must be square");
    if (!q.allFinite() || !q.isApprox(q.transpose(), 1e-12))
        throw std::invalid_argument("MpcConfig: q must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() <= 0.0)
        throw std::invalid_argument("MpcConfig: q must be positive definite");
}

StackedPredictor stack_prediction(const LinearModel& model, int horizon)
{
    if (horizon < 1)
        throw std::invalid_argument("stack_prediction: horizon must be >= 1");
    const Eigen::Index nx = model.states();
    const Eigen::Index ny = model.outputs();
    if (model.a.cols() != nx || model.b.size() != nx || model.c.cols() != nx)
        throw std::invalid_argument("stack_prediction: inconsistent model dimensions");

    StackedPredictor sp;
    sp.horizon = horizon;
    sp.phi.resize(ny * horizon, nx);
    sp.theta.setZero(ny * horizon, horizon);

    // markov.col(i) = c a^i b
    Eigen::MatrixXd markov(ny, horizon);
    Eigen::MatrixXd c_pow = model.c;  // c a^i
    for (int i = 0; i < horizon; ++i) {
        markov.col(i) = c_pow * model.b;
        c_pow = c_pow * model.a;
        sp.phi.middleRows(i * ny, ny) = c_pow;
    }
    for (int j = 0; j < horizon; ++j)
        for (int i = j; i < horizon; ++i)
            sp.theta.block(i * ny, j, ny, 1) = markov.col(i - j);
    return sp;
}

StackedPredictor stack_prediction(const DiscreteDynamics& dyn, int horizon)
{
    return stack_prediction(LinearModel::from(dyn), horizon);
}

FeedbackGain synthesize_gain(const Eigen::MatrixXd& theta, const MpcConfig& cfg, double lambda)
{
    cfg.validate();
    const Eigen::Index ny = cfg.q.rows();
    const Eigen::Index n = theta.cols();
    if (n != cfg.horizon || theta.rows() != ny * n)
        throw std::invalid_argument(fmt::format("synthesize_gain: theta is {}x{}, expected {}x{}",
                                                theta.rows(), theta.cols(), ny * cfg.horizon, cfg.horizon));
    if (!std::isfinite(lambda) || lambda < 0.0 || lambda > 1.0)
        throw std::invalid_argument("synthesize_gain: weight must lie in [0, 1]");

    // Q theta, exploiting the block-diagonal structure of the stacked weight.
    Eigen::MatrixXd q_theta(theta.rows(), n);
    for (Eigen::Index i = 0; i < n; ++i)
        q_theta.middleRows(i * ny, ny).noalias() = cfg.q * theta.middleRows(i * ny, ny);

    Eigen::MatrixXd normal = lambda * lambda * (theta.transpose() * q_theta);
    normal.diagonal().array() += cfg.r;
    const Eigen::MatrixXd rhs = lambda * q_theta.transpose();  // lambda theta' Q (Q symmetric)

    FeedbackGain gain;
    Eigen::LLT<Eigen::MatrixXd> llt(normal);
    if (llt.info() == Eigen::Success) {
        gain.k = llt.solve(rhs);
    } else {
        // [lambda sqrt(Q) theta; sqrt(R)]^+ [sqrt(Q); 0]
        const Eigen::MatrixXd sqrt_q = Eigen::LLT<Eigen::MatrixXd>(cfg.q).matrixU();
        Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(theta.rows() + n, n);
        Eigen::MatrixXd right = Eigen::MatrixXd::Zero(theta.rows() + n, theta.rows());
        for (Eigen::Index i = 0; i < n; ++i) {
            lhs.middleRows(i * ny, ny) = lambda * sqrt_q * theta.middleRows(i * ny, ny);
            right.block(i * ny, i * ny, ny, ny) = sqrt_q;
        }
        lhs.bottomRows(n).diagonal().setConstant(std::sqrt(cfg.r));
        gain.k = lhs.completeOrthogonalDecomposition().pseudoInverse() * right;
    }
    if (!gain.k.allFinite())
        throw std::runtime_error("synthesize_gain: numerically singular normal equations");
    return gain;
}

FeedbackGain synthesize_automation_gain(const StackedPredictor& sp, const MpcConfig& cfg)
{
    return synthesize_gain(sp.theta, cfg, 1.0);
}

FeedbackGain synthesize_driver_gain(const TildePredictor& tp, const MpcConfig& cfg_d, double lambda_d)
{
    return synthesize_gain(tp.stacked.theta, cfg_d, lambda_d);
}

TildePredictor build_tilde(const LinearModel& model, const StackedPredictor& sp, const FeedbackGain& k_a,
                           double lambda_a)
{
    if (!std::isfinite(lambda_a) || lambda_a < 0.0 || lambda_a > 1.0)
        throw std::invalid_argument("build_tilde: lambda_a must lie in [0, 1]");
    if (k_a.k.cols() != sp.phi.rows() || k_a.horizon() != sp.horizon)
        throw std::invalid_argument("build_tilde: gain does not match predictor");

    TildePredictor tp;
    tp.lambda_a = lambda_a;
    tp.a_tilde = model.a - lambda_a * model.b * (k_a.first_row() * sp.phi);
    tp.stacked = stack_prediction(LinearModel{tp.a_tilde, model.b, model.c}, sp.horizon);
    return tp;
}

void stack_samples(std::span<const OutputSample> samples, Eigen::VectorXd& out)
{
    out.resize(static_cast<Eigen::Index>(2 * samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out(static_cast<Eigen::Index>(2 * i)) = samples[i].y;
        out(static_cast<Eigen::Index>(2 * i + 1)) = samples[i].psi;
    }
}

double automation_command(const FeedbackGain& k_a, const StackedPredictor& sp, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& r_stack)
{
    if (r_stack.size() != sp.phi.rows())
        throw std::invalid_argument(fmt::format("automation_command: reference stack has {} entries, expected {}",
                                                r_stack.size(), sp.phi.rows()));
    return k_a.first_row().dot(r_stack - sp.phi * x);
}

void assemble_w_a(const FeedbackGain& k_a, const Eigen::VectorXd& r_a_long, Eigen::VectorXd& w_a)
{
    const Eigen::Index n = k_a.horizon();
    const Eigen::Index stride = k_a.k.cols() / n;  // output dimension
    if (r_a_long.size() != stride * (2 * n - 1))
        throw std::invalid_argument(fmt::format("assemble_w_a: long reference has {} entries, expected {}",
                                                r_a_long.size(), stride * (2 * n - 1)));
    const auto row = k_a.first_row();
    w_a.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
        w_a(i) = row.dot(r_a_long.segment(i * stride, stride * n));
}

Eigen::VectorXd assemble_w_a(const FeedbackGain& k_a, const Eigen::VectorXd& r_a_long)
{
    Eigen::VectorXd w_a;
    assemble_w_a(k_a, r_a_long, w_a);
    return w_a;
}

double driver_command(const FeedbackGain& k_d, const TildePredictor& tp, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& r_d_stack, const Eigen::VectorXd& w_a, PredictionWorkspace& ws)
{
    const auto& sp = tp.stacked;
    if (r_d_stack.size() != sp.phi.rows())
        throw std::invalid_argument(fmt::format("driver_command: reference stack has {} entries, expected {}",
                                                r_d_stack.size(), sp.phi.rows()));
    if (w_a.size() != sp.horizon)
        throw std::invalid_argument(fmt::format("driver_command: w_A has {} entries, expected {}", w_a.size(),
                                                sp.horizon));
    ws.eps.noalias() = r_d_stack - sp.phi * x;
    if (tp.lambda_a != 0.0)
        ws.eps.noalias() -= tp.lambda_a * (sp.theta * w_a);
    return k_d.first_row().dot(ws.eps);
}

double automation_command(const FeedbackGain& k_a, const StackedPredictor& sp, const VehicleState& x,
                          std::span<const OutputSample> r_window, PredictionWorkspace& ws)
{
    if (static_cast<int>(r_window.size()) != sp.horizon)
        throw std::invalid_argument(fmt::format("automation_command: window has {} samples, expected {}",
                                                r_window.size(), sp.horizon));
    stack_samples(r_window, ws.r_stack);
    return automation_command(k_a, sp, Eigen::VectorXd(x.vector()), ws.r_stack);
}

void assemble_w_a(const FeedbackGain& k_a, std::span<const OutputSample> r_a_long, PredictionWorkspace& ws)
{
    if (static_cast<int>(r_a_long.size()) != 2 * k_a.horizon() - 1)
        throw std::invalid_argument(fmt::format("assemble_w_a: window has {} samples, expected {}",
                                                r_a_long.size(), 2 * k_a.horizon() - 1));
    stack_samples(r_a_long, ws.r_stack);
    assemble_w_a(k_a, ws.r_stack, ws.w_a);
}

double driver_command(const FeedbackGain& k_d, const TildePredictor& tp, const VehicleState& x,
                      std::span<const OutputSample> r_d_window, const Eigen::VectorXd& w_a,
                      PredictionWorkspace& ws)
{
    if (static_cast<int>(r_d_window.size()) != tp.stacked.horizon)
        throw std::invalid_argument(fmt::format("driver_command: window has {} samples, expected {}",
                                                r_d_window.size(), tp.stacked.horizon));
    stack_samples(r_d_window, ws.r_stack);
    return driver_command(k_d, tp, Eigen::VectorXd(x.vector()), ws.r_stack, w_a, ws);
}

}  // namespace isc
