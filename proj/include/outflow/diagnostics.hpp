#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "outflow/background.hpp"
#include "outflow/numerics.hpp"
#include "outflow/pde_solver.hpp"

namespace outflow {

// r - ln r - 1; throws DomainError for r <= 0
double eta(double r);

// Quadrature weight of every node for integrals over the flattened domain, including e^{beta y1}.
// Throws ConfigError("beta_overflow") when beta L > 500 and ConfigError("invalid_beta") when beta < 0.
Field node_weights(const FlattenedGrid& grid, double beta);

// Throws ConfigError("beta_too_large") unless 0 <= beta <= alpha_fit / 2.
void validate_beta(double beta, const std::optional<double>& alpha_fit);

double integrate(const Field& f, const FlattenedGrid& grid, double beta = 0.0);
double weighted_norm(const Field& f, const FlattenedGrid& grid, double beta);
double weighted_norm(const Perturbation& p, const FlattenedGrid& grid, double beta);
// weighted L^2 distance between two states over all fields
double weighted_distance(const FieldState& a, const FieldState& b, const FlattenedGrid& grid, double beta);

Perturbation difference(const FieldState& a, const FieldState& b);

// State the energy form is measured against. The background variant uses the profile temperature in
// the density term and the full background temperature in the thermal term; the stationary variant
// uses the stationary state for both.
struct EnergyReference {
    Field rho;
    VectorField u;
    Field theta_density;
    Field theta_thermal;
};
EnergyReference background_reference(const BackgroundState& bg);
EnergyReference stationary_reference(const FieldState& stationary);

struct EnergyForm {
    Field density;
    double integral = 0.0;
};
// Pointwise rho * energy and its integral; throws DomainError("nonpositive_state").
EnergyForm energy_form(const FieldState& s, const EnergyReference& ref, const FlattenedGrid& grid,
                       const GasParams& g);

struct EnergyNorms {
    double e0 = 0.0, e1 = 0.0;
};
// E_{0,beta} = |P|_beta^2 + |P|^2 and E_{1,beta} = |P|_beta^2 + |P|_{H^1}^2
EnergyNorms energy_norms(const Perturbation& p, const FlattenedGrid& grid, double beta);

struct DissipationNorms {
    double d0 = 0.0, d1 = 0.0;
};
// Dissipative norms with time derivatives taken from the solver right-hand side.
DissipationNorms dissipation_norms(const FieldState& s, const BackgroundState& bg, const FlowProblem& p,
                                   double beta, Convection conv = Convection::upwind2);

struct DecayFit {
    double sigma = 0.0;
    double C = 0.0;
    double r2 = 0.0;
    std::size_t count = 0;
};
// Log-linear least squares of value ~ C e^{-sigma t} over t in [t_lo, t_hi].
// Throws DomainError("nonpositive_series") or DomainError("too_few_samples").
DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& v, double t_lo, double t_hi);

struct ContractionWeights {
    Field rho_star;
    Field theta_ref;
};
// rho* is the mean of the two densities so that swapping the states leaves the weights unchanged.
ContractionWeights contraction_weights(const FieldState& a, const FieldState& b, const Field& theta_ref);
double contraction_functional(const Perturbation& diff, const ContractionWeights& w, const FlattenedGrid& grid,
                              double beta, const GasParams& g);

// Terms of the integrated energy identity at one instant (one-dimensional, flat boundary).
struct EnergyBudget {
    double energy = 0.0;       // integral of rho * energy
    double dissipation = 0.0;  // integral of mu1 psi'^2 + kappa zeta'^2 / theta
    double boundary_flux = 0.0;
    double remainder = 0.0;    // integral of the quadratic remainder
};
EnergyBudget energy_budget(const FieldState& s, const PlanarProfile& profile, const FlattenedGrid& grid,
                           const GasParams& g);

struct EnergyIdentityInterval {
    double t0 = 0.0, t1 = 0.0;
    double rate = 0.0;  // (E(t1) - E(t0)) / (t1 - t0)
    double dissipation = 0.0, boundary_flux = 0.0, remainder = 0.0;  // trapezoid averages
    double residual = 0.0;
};
struct EnergyIdentityReport {
    std::vector<EnergyIdentityInterval> intervals;
    double max_residual = 0.0;
    double scale = 0.0;  // largest |term| seen, for relative comparisons
    bool dissipation_nonnegative = true;
};
// Throws DomainError("cadence_too_coarse") for fewer than two snapshots or nonincreasing times, and
// DomainError("unsupported_geometry") unless the grid is 1-D. The background must equal the profile.
EnergyIdentityReport energy_identity_residual(const std::vector<FieldState>& snapshots,
                                              const PlanarProfile& profile, const FlattenedGrid& grid,
                                              const GasParams& g);

struct HardyResult {
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
    bool flagged = false;  // ratio above hardy_flag_ratio
};
constexpr double hardy_flag_ratio = 10.0;
// lhs = int e^{-alpha y1} f^2, rhs = |grad f|^2 + |trace of f|^2
HardyResult hardy_check(const Field& f, const FlattenedGrid& grid, double alpha);

struct EnergyReport {
    double t = 0.0;
    double weighted_norm = 0.0;
    double e0 = 0.0, e1 = 0.0;
    double energy = 0.0;
    double contraction = 0.0;
    EnergyBudget budget;
};
// Budget terms beyond the energy integral are filled only for 1-D runs.
EnergyReport energy_report(const FieldState& s, const BackgroundState& bg, const PlanarProfile& profile,
                           const FlowProblem& p, double beta);

void write_report_csv_header(std::ostream& os);
void write_report_csv_row(std::ostream& os, const EnergyReport& r);

}  // namespace outflow
