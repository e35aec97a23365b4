#pragma once

#include <Eigen/Dense>

namespace isc {

using Matrix4 = Eigen::Matrix4d;
using Vector4 = Eigen::Vector4d;
using OutputMatrix = Eigen::Matrix<double, 2, 4>;

/**
 * @brief Physical constants of the single-track (bicycle) model.
 *
 * Defaults are the passenger-car values used throughout the simulations.
 */
struct VehicleParams {
    double cf = 12000.0;   //!< front cornering stiffness [N/rad]
    double cr = 8000.0;    //!< rear cornering stiffness [N/rad]
    double a = 0.92;       //!< mass center to front axle [m]
    double b = 1.38;       //!< mass center to rear axle [m]
    double m = 1200.0;     //!< mass [kg]
    double iz = 1500.0;    //!< polar moment of inertia [kg m^2]
    double is = 16.0;      //!< steering ratio
    double u_long = 20.0;  //!< constant longitudinal velocity U [m/s]

    /// Throws std::invalid_argument naming the first non-positive field.
    void validate() const;

    bool operator==(const VehicleParams&) const = default;
};

/// dx/dt = a_c x + b_c u,  z = c_c x   with x = (v, omega, y, psi).
struct ContinuousDynamics {
    Matrix4 a_c;
    Vector4 b_c;
    OutputMatrix c_c;
};

/// x(k+1) = a x(k) + b u(k),  z(k) = c x(k).
struct DiscreteDynamics {
    Matrix4 a;
    Vector4 b;
    OutputMatrix c;
    double t_s = 0.0;
};

struct VehicleState {
    double v = 0.0;      //!< lateral velocity [m/s]
    double omega = 0.0;  //!< yaw rate [rad/s]
    double y = 0.0;      //!< lateral displacement [m]
    double psi = 0.0;    //!< yaw angle [rad]

    [[nodiscard]] Vector4 vector() const { return {v, omega, y, psi}; }
    [[nodiscard]] static VehicleState from_vector(const Vector4& x) { return {x(0), x(1), x(2), x(3)}; }
    [[nodiscard]] bool finite() const;

    bool operator==(const VehicleState&) const = default;
};

struct OutputSample {
    double y = 0.0;    //!< lateral displacement [m]
    double psi = 0.0;  //!< yaw angle [rad]

    bool operator==(const OutputSample&) const = default;
};

/// Selector picking (y, psi) out of the state.
[[nodiscard]] OutputMatrix output_selector();

[[nodiscard]] ContinuousDynamics build_continuous(const VehicleParams& params);

/**
 * @brief Exact zero-order-hold discretization.
 *
 * Exponentiates the augmented block [[a_c, b_c], [0, 0]] * t_s; c is copied.
 * Throws std::invalid_argument for t_s <= 0 or non-finite entries.
 */
[[nodiscard]] DiscreteDynamics discretize(const ContinuousDynamics& cont, double t_s);

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
[[nodiscard]] Eigen::MatrixXd expm(const Eigen::MatrixXd& m);

[[nodiscard]] VehicleState step(const DiscreteDynamics& dyn, const VehicleState& x, double u);
[[nodiscard]] OutputSample output(const DiscreteDynamics& dyn, const VehicleState& x);

}  // namespace isc
