#pragma once

#include <functional>
#include <string>
#include <vector>

#include "outflow/boundary_extension.hpp"
#include "outflow/errors.hpp"
#include "outflow/gas_model.hpp"
#include "outflow/geometry.hpp"

namespace outflow {

struct FieldState {
    double t = 0.0;
    Field rho;
    VectorField u;  // d components
    Field theta;

    int d() const { return static_cast<int>(u.size()); }
    std::size_t size() const { return rho.size(); }
};

FieldState zero_state(const FlattenedGrid& grid);
// Constant state (rho+, (u+, 0), theta+) on every node.
FieldState far_field_state(const FlattenedGrid& grid, const FarFieldState& ff);
// max over nodes and fields of |a - b|
double max_abs_difference(const FieldState& a, const FieldState& b);

enum class Convection { upwind1, upwind2, upwind2_limited };
std::string to_string(Convection c);
Convection convection_from_string(const std::string& s);

struct SolverConfig {
    double cfl = 0.4;
    double t_end = 1.0;
    double snapshot_dt = 0.0;  // 0: only initial and final states
    double steady_tol = 1e-9;
    Convection convection = Convection::upwind1;
    double fixed_dt = 0.0;  // > 0 overrides stable_dt

    void validate() const;
};

// Everything the right-hand side needs besides the state.
struct FlowProblem {
    FlowProblem(FlattenedGrid grid, GasParams gas, FarFieldState ff, const BoundaryData& bd);

    FlattenedGrid grid;
    GasParams gas;
    FarFieldState ff;
    VectorField u_b;  // boundary velocity, d components by tangential node
    Field theta_b;
};

class BlowUpError : public Error {
public:
    BlowUpError(const std::string& msg, FieldState last_good, double t, std::size_t node)
        : Error(ErrorClass::blowup, "blow_up", msg), last_good_(std::move(last_good)), t_(t), node_(node) {}
    const FieldState& last_good() const { return last_good_; }
    double time() const { return t_; }
    std::size_t node() const { return node_; }

private:
    FieldState last_good_;
    double t_;
    std::size_t node_;
};

// Dirichlet data: (u_b, theta_b) at y1 = 0, far field at y1 = L.
void apply_boundary_conditions(FieldState& s, const FlowProblem& p);

// Time derivatives of (rho, u, theta); zero where the value is prescribed.
void rhs_eval(const FieldState& s, const FlowProblem& p, Convection conv, FieldState& out);
FieldState rhs_eval(const FieldState& s, const FlowProblem& p, Convection conv);

double stable_dt(const FieldState& s, const FlowProblem& p, double cfl);

// Throws BlowUpError (carrying `last_good`) on a nonpositive or non-finite node.
void check_positivity(const FieldState& s, const FlowProblem& p, const FieldState& last_good);

// Two-stage SSP Runge-Kutta with reusable work arrays.
class Stepper {
public:
    Stepper(const FlowProblem& p, Convection conv);
    void step(FieldState& s, double dt);

private:
    const FlowProblem& p_;
    Convection conv_;
    FieldState k_, stage_, start_;
};

FieldState step(const FieldState& s, const FlowProblem& p, double dt, Convection conv = Convection::upwind1);

struct Trajectory {
    FieldState final_state;
    std::vector<FieldState> snapshots;
    std::size_t steps = 0;
};

using Observer = std::function<void(const FieldState&)>;

// Marches to cfg.t_end. Snapshots (and observer calls) at t0, every snapshot_dt, and t_end.
Trajectory evolve(const FieldState& s0, const FlowProblem& p, const SolverConfig& cfg, const Observer& obs = {},
                  bool keep_snapshots = true);

}  // namespace outflow
