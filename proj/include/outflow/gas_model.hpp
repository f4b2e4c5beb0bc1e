#pragma once

#include <Eigen/Dense>

namespace outflow {

struct GasParams {
    double mu = 1.0;
    double lambda = 0.0;
    double kappa = 1.0;
    double R = 1.0;
    double gamma = 5.0 / 3.0;

    double cv() const { return R / (gamma - 1.0); }
    double mu1() const { return 2.0 * mu + lambda; }
    // throws ConfigError when an invariant fails
    void validate() const;
};

struct FarFieldState {
    double rho = 1.0;
    double u = -2.0;
    double theta = 1.0;

    void validate() const;
};

enum class FlowRegime { supersonic, sonic_or_subsonic };

double pressure(double rho, double theta, const GasParams& g);
double sound_speed(double theta, const GasParams& g);
double mach_number(const FarFieldState& ff, const GasParams& g);
FlowRegime check_supersonic(const FarFieldState& ff, const GasParams& g);

// Symmetric matrix of the boundary quadratic form in (phi, psi1, zeta).
Eigen::Matrix3d f1_matrix(const FarFieldState& ff, const GasParams& g);
// Closed-form determinant (R cv rho |u| / 8)(u^2 - gamma R theta).
double f1_determinant(const FarFieldState& ff, const GasParams& g);
// Sylvester criterion on leading principal minors.
bool is_positive_definite(const Eigen::Matrix3d& m);

}  // namespace outflow
