#pragma once

#include "outflow/boundary_extension.hpp"
#include "outflow/pde_solver.hpp"
#include "outflow/planar_profile.hpp"

namespace outflow {

struct BackgroundState {
    Field rho;
    VectorField u;
    Field theta;
    // profile part alone (the temperature without the extension), needed by the energy form
    Field theta_profile;
};

struct Perturbation {
    Field phi;
    VectorField psi;
    Field zeta;
};

BackgroundState assemble_background(const PlanarProfile& profile, const Extension& ext, const FlattenedGrid& grid);

Perturbation extract_perturbation(const FieldState& s, const BackgroundState& bg);
FieldState embed(const BackgroundState& bg, const Perturbation& pert, double t = 0.0);
FieldState background_state(const BackgroundState& bg);

// max |psi|, |zeta| on y1 = 0; nonzero values violate the perturbation boundary condition
double boundary_defect(const Perturbation& pert, const FlattenedGrid& grid);

struct Forcing {
    Field F;
    VectorField G;
    Field H;
};

// Stationary forcing terms evaluated from closed-form expressions with exact profile,
// extension and geometry derivatives.
Forcing forcing_terms(const PlanarProfile& profile, const Extension& ext, const FlattenedGrid& grid,
                      const GasParams& g);

// ||(F, G, H)||_{L^2_{e,beta}} with trapezoid weights in y1
double forcing_norm(const Forcing& f, const FlattenedGrid& grid, double beta);

}  // namespace outflow
