#include <cmath>
#include <limits>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "isc/vehicle.hpp"
#include "oracle.hpp"

using namespace isc;

TEST(VehicleParams, DefaultsAreThePassengerCar)
{
    const VehicleParams p;
    EXPECT_EQ(p.cf, 12000.0);
    EXPECT_EQ(p.cr, 8000.0);
    EXPECT_EQ(p.a, 0.92);
    EXPECT_EQ(p.b, 1.38);
    EXPECT_EQ(p.m, 1200.0);
    EXPECT_EQ(p.iz, 1500.0);
    EXPECT_EQ(p.is, 16.0);
    EXPECT_EQ(p.u_long, 20.0);
    EXPECT_NO_THROW(p.validate());
}

TEST(VehicleParams, RejectsNonPositiveFields)
{
    VehicleParams p;
    p.m = 0.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = {};
    p.u_long = -1.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = {};
    p.cf = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(ContinuousDynamics, HandComputedEntries)
{
    const auto cont = build_continuous(VehicleParams{});
    // -(12000 + 8000) / (1200 * 20)
    EXPECT_NEAR(cont.a_c(0, 0), -0.8333333333333334, 1e-15);
    // a Cf = b Cr = 11040, so only -U remains
    EXPECT_NEAR(cont.a_c(0, 1), -20.0, 1e-15);
    EXPECT_NEAR(cont.a_c(1, 0), 0.0, 1e-15);
    // -(0.8464 * 12000 + 1.9044 * 8000) / (1500 * 20)
    EXPECT_NEAR(cont.a_c(1, 1), -0.8464, 1e-15);
    EXPECT_EQ(cont.a_c(2, 0), 1.0);
    EXPECT_EQ(cont.a_c(2, 3), 20.0);
    EXPECT_EQ(cont.a_c(3, 1), 1.0);
    EXPECT_NEAR(cont.b_c(0), 0.625, 1e-15);
    EXPECT_NEAR(cont.b_c(1), 0.46, 1e-15);
    EXPECT_EQ(cont.b_c(2), 0.0);
    EXPECT_EQ(cont.b_c(3), 0.0);
    EXPECT_EQ(cont.c_c, output_selector());
}

TEST(Expm, ZeroGivesIdentity)
{
    EXPECT_TRUE(expm(Eigen::MatrixXd::Zero(5, 5)).isIdentity(0.0));
}

TEST(Expm, DiagonalMatrix)
{
    const Eigen::Vector3d d(-3.0, 0.5, 7.0);
    const Eigen::MatrixXd e = expm(Eigen::MatrixXd(d.asDiagonal()));
    for (int i = 0; i < 3; ++i)
        EXPECT_NEAR(e(i, i) / std::exp(d(i)), 1.0, 1e-13);
    EXPECT_NEAR(e(0, 1), 0.0, 1e-15);
}

TEST(Expm, NilpotentIsExactPolynomial)
{
    Eigen::MatrixXd n = Eigen::MatrixXd::Zero(3, 3);
    n(0, 1) = 2.0;
    n(1, 2) = 3.0;
    const Eigen::MatrixXd expected = Eigen::MatrixXd::Identity(3, 3) + n + 0.5 * n * n;
    EXPECT_TRUE(expm(n).isApprox(expected, 1e-14));
}

TEST(Expm, AgreesWithEigenMatrixFunctions)
{
    std::srand(7);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixXd m = Eigen::MatrixXd::Random(5, 5) * (1.0 + trial);
        const Eigen::MatrixXd reference = m.exp();
        EXPECT_LE((expm(m) - reference).cwiseAbs().maxCoeff(), 1e-10 * reference.cwiseAbs().maxCoeff())
            << "trial " << trial;
    }
}

TEST(Discretize, MatchesRungeKuttaOracle)
{
    const VehicleParams p;
    const auto dyn = discretize(build_continuous(p), 0.02);
    const auto [a, b] = oracle::integrate_zoh({p.cf, p.cr, p.a, p.b, p.m, p.iz, p.is, p.u_long}, 0.02, 1000);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j)
            EXPECT_NEAR(dyn.a(i, j), a[i][j], 1e-9);
        EXPECT_NEAR(dyn.b(i), b[i], 1e-9);
    }
    EXPECT_EQ(dyn.t_s, 0.02);
}

TEST(Discretize, Semigroup)
{
    const auto cont = build_continuous(VehicleParams{});
    const auto full = discretize(cont, 0.02);
    const auto half = discretize(cont, 0.01);
    EXPECT_LE((full.a - half.a * half.a).cwiseAbs().maxCoeff(), 1e-12);
    // b(T) = a(T/2) b(T/2) + b(T/2)
    EXPECT_LE((full.b - (half.a * half.b + half.b)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Discretize, RejectsBadInput)
{
    const auto cont = build_continuous(VehicleParams{});
    EXPECT_THROW((void)discretize(cont, 0.0), std::invalid_argument);
    EXPECT_THROW((void)discretize(cont, -0.02), std::invalid_argument);
    EXPECT_THROW((void)discretize(cont, std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
    auto broken = cont;
    broken.a_c(0, 0) = std::numeric_limits<double>::infinity();
    EXPECT_THROW((void)discretize(broken, 0.02), std::invalid_argument);
}

TEST(Step, LinearUpdateAndOutput)
{
    const auto dyn = discretize(build_continuous(VehicleParams{}), 0.02);
    const VehicleState x{0.1, -0.2, 1.5, 0.05};
    const VehicleState next = step(dyn, x, 0.3);
    const Vector4 expected = dyn.a * x.vector() + dyn.b * 0.3;
    EXPECT_EQ(next.vector(), expected);
    const OutputSample z = output(dyn, x);
    EXPECT_EQ(z.y, 1.5);
    EXPECT_EQ(z.psi, 0.05);
}

TEST(Step, RejectsNonFinite)
{
    const auto dyn = discretize(build_continuous(VehicleParams{}), 0.02);
    EXPECT_THROW((void)step(dyn, VehicleState{}, std::numeric_limits<double>::infinity()), std::invalid_argument);
    EXPECT_THROW((void)step(dyn, VehicleState{std::nan(""), 0, 0, 0}, 0.0), std::invalid_argument);
}

TEST(VehicleState, VectorRoundTrip)
{
    const VehicleState x{1.0, 2.0, 3.0, 4.0};
    EXPECT_EQ(VehicleState::from_vector(x.vector()), x);
    EXPECT_TRUE(x.finite());
    EXPECT_FALSE((VehicleState{0, std::nan(""), 0, 0}).finite());
}
