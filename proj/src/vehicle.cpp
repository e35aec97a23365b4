#include "isc/vehicle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace isc {

void VehicleParams::validate() const
{
    const auto require_positive = [](double value, const char* name) {
        if (!std::isfinite(value) || value <= 0.0)
            throw std::invalid_argument(std::string("VehicleParams: ") + name + " must be positive and finite");
    };
    require_positive(cf, "cf");
    require_positive(cr, "cr");
    require_positive(a, "a");
    require_positive(b, "b");
    require_positive(m, "m");
    require_positive(iz, "iz");
    require_positive(is, "is");
    require_positive(u_long, "u_long");
}

bool VehicleState::finite() const
{
    return std::isfinite(v) && std::isfinite(omega) && std::isfinite(y) && std::isfinite(psi);
}

OutputMatrix output_selector()
{
    OutputMatrix c;
    c << 0, 0, 1, 0,
         0, 0, 0, 1;
    return c;
}

ContinuousDynamics build_continuous(const VehicleParams& p)
{
    p.validate();
    const double mu = p.m * p.u_long;
    const double iu = p.iz * p.u_long;

    ContinuousDynamics cont;
    cont.a_c << -(p.cf + p.cr) / mu, -(p.a * p.cf - p.b * p.cr) / mu - p.u_long, 0, 0,
                -(p.a * p.cf - p.b * p.cr) / iu, -(p.a * p.a * p.cf + p.b * p.b * p.cr) / iu, 0, 0,
                1, 0, 0, p.u_long,
                0, 1, 0, 0;
    cont.b_c << p.cf / (p.is * p.m), p.a * p.cf / (p.is * p.iz), 0, 0;
    cont.c_c = output_selector();
    return cont;
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("expm: matrix must be square");
    if (!m.allFinite())
        throw std::invalid_argument("expm: non-finite entries");

    // Scale so that the 1-norm is below 1/2; 20 Taylor terms then leave a
    // truncation error under 1e-20 relative before squaring.
    const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5)
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Eigen::MatrixXd scaled = m / std::ldexp(1.0, squarings);

    const auto n = m.rows();
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= 20; ++k) {
        term = term * scaled / static_cast<double>(k);
        result += term;
    }
    for (int i = 0; i < squarings; ++i)
        result = result * result;
    return result;
}

DiscreteDynamics discretize(const ContinuousDynamics& cont, double t_s)
{
    if (!std::isfinite(t_s) || t_s <= 0.0)
        throw std::invalid_argument("discretize: sampling period must be positive");
    if (!cont.a_c.allFinite() || !cont.b_c.allFinite() || !cont.c_c.allFinite())
        throw std::invalid_argument("discretize: non-finite matrix entries");

    Eigen::Matrix<double, 5, 5> augmented = Eigen::Matrix<double, 5, 5>::Zero();
    augmented.topLeftCorner<4, 4>() = cont.a_c * t_s;
    augmented.topRightCorner<4, 1>() = cont.b_c * t_s;
    const Eigen::MatrixXd e = expm(augmented);

    DiscreteDynamics dyn;
    dyn.a = e.topLeftCorner<4, 4>();
    dyn.b = e.topRightCorner<4, 1>();
    dyn.c = cont.c_c;
    dyn.t_s = t_s;
    return dyn;
}

VehicleState step(const DiscreteDynamics& dyn, const VehicleState& x, double u)
{
    if (!x.finite() || !std::isfinite(u))
        throw std::invalid_argument("step: non-finite state or input");
    return VehicleState::from_vector(dyn.a * x.vector() + dyn.b * u);
}

OutputSample output(const DiscreteDynamics& dyn, const VehicleState& x)
{
    const Eigen::Vector2d z = dyn.c * x.vector();
    return {z(0), z(1)};
}

}  // namespace isc
