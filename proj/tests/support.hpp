#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "isc/predictor.hpp"
#include "oracle.hpp"

namespace testing_support {

/// Random stable plant (spectral radius 0.95) with nx states and ny outputs.
struct RandomProblem {
    isc::LinearModel model;
    isc::MpcConfig automation;
    isc::MpcConfig driver;
    Eigen::VectorXd x;
    std::vector<Eigen::VectorXd> r_d;  //!< N samples
    std::vector<Eigen::VectorXd> r_a;  //!< 2N-1 samples
    double lambda_d = 0.5;
};

inline Eigen::MatrixXd random_spd(std::mt19937& rng, int n)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = u(rng);
    return m * m.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
}

inline RandomProblem random_problem(std::mt19937& rng, int nx, int ny, int horizon)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.05, 2.0);
    RandomProblem p;
    Eigen::MatrixXd a(nx, nx);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < nx; ++j)
            a(i, j) = u(rng);
    a *= 0.95 / a.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::VectorXd b(nx);
    Eigen::MatrixXd c(ny, nx);
    for (int i = 0; i < nx; ++i)
        b(i) = u(rng);
    for (int i = 0; i < ny; ++i)
        for (int j = 0; j < nx; ++j)
            c(i, j) = u(rng);
    p.model = {a, b, c};
    p.automation = {horizon, random_spd(rng, ny), pos(rng)};
    p.driver = {horizon, random_spd(rng, ny), pos(rng)};
    p.x.resize(nx);
    for (int i = 0; i < nx; ++i)
        p.x(i) = u(rng);
    auto sample = [&] {
        Eigen::VectorXd s(ny);
        for (int i = 0; i < ny; ++i)
            s(i) = u(rng);
        return s;
    };
    for (int i = 0; i < horizon; ++i)
        p.r_d.push_back(sample());
    for (int i = 0; i < 2 * horizon - 1; ++i)
        p.r_a.push_back(sample());
    p.lambda_d = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    return p;
}

inline Eigen::VectorXd stack(const std::vector<Eigen::VectorXd>& samples)
{
    const auto ny = samples.front().size();
    Eigen::VectorXd out(ny * static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i)
        out.segment(static_cast<Eigen::Index>(i) * ny, ny) = samples[i];
    return out;
}

inline oracle::Mat to_oracle(const Eigen::MatrixXd& m)
{
    oracle::Mat out = oracle::zeros(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out[i][j] = m(i, j);
    return out;
}

inline oracle::Vec to_oracle_vec(const Eigen::VectorXd& v)
{
    return {v.data(), v.data() + v.size()};
}

inline std::vector<oracle::Vec> to_oracle(const std::vector<Eigen::VectorXd>& samples)
{
    std::vector<oracle::Vec> out;
    for (const auto& s : samples)
        out.push_back(to_oracle_vec(s));
    return out;
}

inline oracle::Plant to_oracle(const isc::LinearModel& m)
{
    return {to_oracle(m.a), to_oracle_vec(m.b), to_oracle(m.c)};
}

inline oracle::Cost to_oracle(const isc::MpcConfig& cfg)
{
    return {to_oracle(cfg.q), cfg.r};
}

/// Library automation and driver commands next to the oracle's for one problem.
struct CommandPair {
    double automation = 0.0;
    double automation_oracle = 0.0;
    double driver = 0.0;
    double driver_oracle = 0.0;
};

inline CommandPair compare_commands(const RandomProblem& p)
{
    const int n = p.automation.horizon;
    const double lambda_a = 1.0 - p.lambda_d;
    const auto sp = isc::stack_prediction(p.model, n);
    const auto k_a = isc::synthesize_automation_gain(sp, p.automation);
    const auto tp = isc::build_tilde(p.model, sp, k_a, lambda_a);
    const auto k_d = isc::synthesize_driver_gain(tp, p.driver, p.lambda_d);

    const std::vector<Eigen::VectorXd> first_window(p.r_a.begin(), p.r_a.begin() + n);
    isc::PredictionWorkspace ws;
    CommandPair out;
    out.automation = isc::automation_command(k_a, sp, p.x, stack(first_window));
    out.driver = isc::driver_command(k_d, tp, p.x, stack(p.r_d), isc::assemble_w_a(k_a, stack(p.r_a)), ws);

    const auto plant = to_oracle(p.model);
    out.automation_oracle =
        oracle::automation_sequence(plant, to_oracle(p.automation), to_oracle_vec(p.x), to_oracle(first_window))[0];
    out.driver_oracle = oracle::driver_sequence(plant, to_oracle(p.driver), to_oracle(p.automation), p.lambda_d,
                                                lambda_a, to_oracle_vec(p.x), to_oracle(p.r_d),
                                                to_oracle(p.r_a))[0];
    return out;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& stem)
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                (stem + "_" + std::to_string(rd()) + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace testing_support
