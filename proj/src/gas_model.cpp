#include "outflow/gas_model.hpp"

#include <cmath>
#include <string>

#include "outflow/errors.hpp"

namespace outflow {

void GasParams::validate() const {
    if (!(mu > 0)) throw ConfigError("invalid_gas", "mu must be positive");
    if (!(2.0 * mu + 3.0 * lambda >= 0)) throw ConfigError("invalid_gas", "2 mu + 3 lambda must be nonnegative");
    if (!(kappa > 0)) throw ConfigError("invalid_gas", "kappa must be positive");
    if (!(R > 0)) throw ConfigError("invalid_gas", "R must be positive");
    if (!(gamma > 1)) throw ConfigError("invalid_gas", "gamma must exceed 1");
}

void FarFieldState::validate() const {
    if (!(rho > 0)) throw ConfigError("invalid_far_field", "far-field density must be positive");
    if (!(theta > 0)) throw ConfigError("invalid_far_field", "far-field temperature must be positive");
    if (!(u < 0)) throw ConfigError("invalid_far_field", "far-field velocity must be negative");
}

double pressure(double rho, double theta, const GasParams& g) {
    if (!(rho > 0) || !(theta > 0))
        throw DomainError("nonpositive_state", "pressure needs rho > 0 and theta > 0");
    return g.R * rho * theta;
}

double sound_speed(double theta, const GasParams& g) { return std::sqrt(g.gamma * g.R * theta); }

double mach_number(const FarFieldState& ff, const GasParams& g) {
    return std::abs(ff.u) / sound_speed(ff.theta, g);
}

FlowRegime check_supersonic(const FarFieldState& ff, const GasParams& g) {
    return mach_number(ff, g) > 1.0 ? FlowRegime::supersonic : FlowRegime::sonic_or_subsonic;
}

Eigen::Matrix3d f1_matrix(const FarFieldState& ff, const GasParams& g) {
    const double au = std::abs(ff.u);
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    m(0, 0) = g.R * ff.theta * au / (2.0 * ff.rho);
    m(1, 1) = ff.rho * au / 2.0;
    m(2, 2) = g.cv() * ff.rho * au / (2.0 * ff.theta);
    m(0, 1) = m(1, 0) = -g.R * ff.theta / 2.0;
    m(1, 2) = m(2, 1) = -g.R * ff.rho / 2.0;
    return m;
}

double f1_determinant(const FarFieldState& ff, const GasParams& g) {
    const double au = std::abs(ff.u);
    return (g.R * g.cv() * ff.rho * au / 8.0) * (ff.u * ff.u - g.gamma * g.R * ff.theta);
}

bool is_positive_definite(const Eigen::Matrix3d& m) {
    const double m1 = m(0, 0);
    const double m2 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return m1 > 0 && m2 > 0 && m.determinant() > 0;
}

}  // namespace outflow
