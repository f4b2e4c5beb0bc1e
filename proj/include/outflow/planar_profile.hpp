#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "outflow/gas_model.hpp"

namespace outflow {

struct PlanarBoundaryData {
    double u_b = -2.0;
    double theta_b = 1.0;

    // |u_b - u+| + |theta_b - theta+|
    double strength(const FarFieldState& ff) const;
};

struct ProfileOptions {
    double delta_max = 0.1;
    double rtol = 1e-10;
    double atol = 1e-10;  // scaled by the boundary strength inside the solver
};

struct PlanarProfile {
    FarFieldState ff;
    GasParams gas;
    std::vector<double> x;
    std::vector<double> rho, u1, theta;
    // deviations from the end state, carried at full relative precision
    std::vector<double> drho, du1, dtheta;
    double delta_tilde = 0.0;
    std::optional<double> alpha_fit;
    double fit_r2 = 0.0;

    std::size_t size() const { return x.size(); }
    double length() const { return x.empty() ? 0.0 : x.back(); }
    double spacing() const { return x.size() > 1 ? x[1] - x[0] : 0.0; }
};

// Right-hand side of the reduced first-order system in (u1, theta).
std::array<double, 2> reduced_rhs(double u1, double theta, const FarFieldState& ff, const GasParams& g);

// Analytic Jacobian of reduced_rhs at an arbitrary admissible point.
Eigen::Matrix2d reduced_jacobian(double u1, double theta, const FarFieldState& ff, const GasParams& g);

struct EndstateLinearization {
    Eigen::Matrix2d jacobian;
    std::array<std::complex<double>, 2> eigenvalues;
    bool stable = false;        // both real parts strictly negative
    double slowest_rate = 0.0;  // min |Re| over the eigenvalues
};

EndstateLinearization endstate_jacobian(const FarFieldState& ff, const GasParams& g);

PlanarProfile solve_profile(const PlanarBoundaryData& bd, const FarFieldState& ff, const GasParams& g,
                            double length, std::size_t n, double tol, const ProfileOptions& opt = {});

struct TailBound {
    double C = 0.0;
    double alpha = 0.0;
};

// Fits |d^k(profile - end state)| <= C delta e^{-alpha x} for x > 1, k in 0..2.
TailBound profile_tail_bound(const PlanarProfile& p, int k);

// First and second x1-derivatives of the profile, evaluated from the ODE.
struct ProfileDerivatives {
    std::vector<double> rho_x, rho_xx, u_x, u_xx, theta_x, theta_xx;
};
ProfileDerivatives profile_derivatives(const PlanarProfile& p);

void write_profile_csv(std::ostream& os, const PlanarProfile& p);

}  // namespace outflow
