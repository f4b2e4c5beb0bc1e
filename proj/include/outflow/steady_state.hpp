#pragma once

#include <optional>
#include <vector>

#include "outflow/diagnostics.hpp"
#include "outflow/pde_solver.hpp"

namespace outflow {

struct SteadyConfig {
    SolverConfig solver;  // cfl, convection and steady_tol are used
    double t_max = 300.0;
    double period = 1.0;  // shift period of the contraction series
    double beta = 0.0;    // weight of the shift-series norm

    void validate() const;
};

struct ShiftSample {
    std::size_t k = 0;
    double t = 0.0;
    double value = 0.0;  // weighted distance between the states at t and t - period
};

struct StationaryResult {
    FieldState state;
    bool converged = false;
    double final_rate = 0.0;  // max |state change| / dt of the last step
    std::size_t steps = 0;
    std::vector<double> history_t, history_rate;  // sampled once per period
    std::vector<ShiftSample> shift_series;
};

// Time-marches until max |state change| / dt <= steady_tol or t_max. A start state whose
// right-hand side already meets the tolerance is returned unchanged.
StationaryResult march_to_steady(const FieldState& s0, const FlowProblem& p, const SteadyConfig& cfg);

// Geometric fit of the shift series over its second half, log s_k ~ log C - sigma k.
// Empty when fewer than three positive samples are available.
std::optional<DecayFit> fit_shift_series(const StationaryResult& r);

struct MassBalance {
    double integral = 0.0;  // integral of div(rho u) over the domain
    double flux_wall = 0.0, flux_far = 0.0;  // integral of rho (u1 - M' u2) over y2 at y1 = 0 and y1 = L
    double defect = 0.0;    // |integral - (flux_far - flux_wall)|
};

struct StationaryResidual {
    double mass = 0.0, momentum = 0.0, energy = 0.0;  // L^2 norms over interior nodes
    MassBalance balance;                               // filled for the fourth-order evaluation
    double total() const;
};

// Steady equations evaluated with the solver operators (order 2) or independent fourth-order
// finite differences (order 4). Throws ConfigError("invalid_order") for any other order.
StationaryResidual stationary_residual(const FieldState& s, const FlowProblem& p, int order,
                                       Convection conv = Convection::upwind2);

struct ContractionConfig {
    SolverConfig solver;  // cfl and convection are used
    double t_end = 40.0;
    double sample_dt = 0.5;
    double beta = 0.0;
    double fit_from = 0.0;  // start of the decay-fit window
    double step_tolerance = 0.05;

    void validate() const;
};

struct ContractionReport {
    std::vector<double> t, functional, distance;
    double max_step_ratio = 0.0;  // max functional(t_{k+1}) / functional(t_k)
    bool nonincreasing = true;    // every ratio within 1 + step_tolerance
    std::optional<DecayFit> fit;  // of the weighted distance
};

// Co-evolves both states with a common step and compares them at every sample time.
ContractionReport two_solution_contraction(const FieldState& a0, const FieldState& b0, const FlowProblem& p,
                                           const Field& theta_ref, const ContractionConfig& cfg);

struct MultidirectionalReport {
    double max_tangential_velocity = 0.0;
    double tangential_variation = 0.0;  // max |u - mean over y2| over nodes and components
    bool multidirectional = false;      // both above the noise floor
};
constexpr double multidirectional_floor = 1e-10;
MultidirectionalReport multidirectional_audit(const FieldState& s, const FlattenedGrid& grid);

}  // namespace outflow
