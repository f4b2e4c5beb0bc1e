#pragma once

#include <vector>

#include "outflow/geometry.hpp"
#include "outflow/planar_profile.hpp"

namespace outflow {

// 1 for s <= 0, 0 for s >= 1, quintic smoothstep in between.
double cutoff(double s);
double cutoff_d1(double s);
double cutoff_d2(double s);

// Boundary velocity and temperature at the tangential nodes, with exact tangential derivatives.
struct BoundaryData {
    VectorField u_b, du_b, d2u_b;  // d components, each n2 values
    Field theta_b, dtheta_b, d2theta_b;
    PlanarBoundaryData reference;

    int d() const { return static_cast<int>(u_b.size()); }
    std::size_t n2() const { return theta_b.size(); }
};

// u_b = (u~_b, 0), theta_b = theta~_b
BoundaryData planar_boundary_data(const FlattenedGrid& grid, const PlanarBoundaryData& ref);
// u_b = |u~_b| n(x2), theta_b = theta~_b
BoundaryData normal_outflow_boundary_data(const FlattenedGrid& grid, const PlanarBoundaryData& ref);
// reference plus trigonometric deviation series for every velocity component and the temperature
BoundaryData series_boundary_data(const FlattenedGrid& grid, const PlanarBoundaryData& ref,
                                  const std::vector<std::vector<TrigMode>>& u_series,
                                  const std::vector<TrigMode>& theta_series);

struct OutflowThresholds {
    double c1 = 1e-6;  // lower bound for u_b . n
    double c2 = 1e-6;  // lower bound for theta_b
};

// Throws DomainError("outflow_violation") naming the first offending tangential node.
void validate_boundary_data(const BoundaryData& bd, const FlattenedGrid& grid, const OutflowThresholds& th = {});

// Tangential H^2-type norm of (u_b - (u~_b, 0), theta_b - theta~_b); the point deviation when d = 1.
double boundary_deviation_norm(const BoundaryData& bd, const FlattenedGrid& grid);

struct ExtensionField {
    VectorField U;
    Field Theta;
};

struct Extension {
    ExtensionField field;
    BoundaryData data;
};

Extension build_extension(const BoundaryData& bd, const FlattenedGrid& grid, const OutflowThresholds& th = {});

// Exact y-derivatives of one extension component at every node.
struct ComponentDerivatives {
    Field v, d1, d2, d11, d22, d12;
};
struct ExtensionDerivatives {
    std::vector<ComponentDerivatives> U;
    ComponentDerivatives Theta;
};
ExtensionDerivatives extension_derivatives(const Extension& ext, const FlattenedGrid& grid);

struct ExtensionNorms {
    double l2 = 0, h1 = 0, h2 = 0;
    double delta = 0;  // boundary deviation norm plus the boundary strength
    double ratio = 0;  // h2 / delta, zero when delta = 0
};
ExtensionNorms extension_norms(const Extension& ext, const FlattenedGrid& grid, const FarFieldState& ff);

}  // namespace outflow
