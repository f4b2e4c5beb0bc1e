#pragma once

#include <string>
#include <vector>

#include "outflow/diagnostics.hpp"
#include "outflow/gas_model.hpp"
#include "outflow/geometry.hpp"
#include "outflow/planar_profile.hpp"

namespace outflow {

// Sign of the smallest eigenvalue of the boundary quadratic form against sign(Mach - 1),
// and the closed-form determinant against the numerical one.
struct F1ScanEntry {
    double mach = 0.0;
    double min_eigenvalue = 0.0;
    double determinant = 0.0;         // numerical
    double determinant_closed = 0.0;  // closed form
    bool sign_matches = false;
    bool determinant_matches = false;
};
std::vector<F1ScanEntry> f1_scan(const GasParams& g, double rho, double theta, const std::vector<double>& machs,
                                 double det_tol = 1e-12);

// Manufactured-field errors of the hat operators on one grid.
struct TransformErrors {
    double h = 0.0;  // largest spacing
    double gradient = 0.0, divergence = 0.0, laplacian = 0.0;
};
// Evaluated on [0, 1] x [0, period) with n1 x n2 nodes for the three manufactured fields.
std::vector<TransformErrors> transform_errors(const BoundaryShape& shape, std::size_t n1, std::size_t n2);

struct TransformOrder {
    std::vector<double> ratios;  // coarse error / fine error per operator and field
    bool order_ok = false;       // every ratio within 4 +- 20%
    bool flat_bitwise = false;   // flat hat operators identical to the plain ones
};
TransformOrder transform_order_test(const BoundaryShape& shape, std::size_t n1 = 21, std::size_t n2 = 16);

// Forcing norm in L^2_{e, 3 alpha / 2} divided by the boundary strength for each strength.
struct ForcingScaling {
    std::vector<double> delta, ratio;
    bool bounded = false;  // max ratio / min ratio <= 2, or every forcing identically zero
};
ForcingScaling forcing_scaling(const GasParams& g, const FarFieldState& ff, const BoundaryShape& shape,
                               std::size_t n1, std::size_t n2, double length, const std::vector<double>& deltas,
                               bool normal_outflow);

// Hardy ratios of a fixed family (constant, exponential, ramp-exponential, compact bump) on a grid.
std::vector<HardyResult> hardy_family(const FlattenedGrid& grid, double alpha);

// Energy-identity residual of a small-bump 1-D run at two resolutions (n1 and 2 n1 - 1 nodes,
// snapshot interval halved).
struct EnergyIdentityRefinement {
    double coarse = 0.0, fine = 0.0, ratio = 0.0;
    double scale = 0.0;
    bool dissipation_nonnegative = true;
};
EnergyIdentityRefinement energy_identity_refinement(const GasParams& g, const FarFieldState& ff,
                                                    const PlanarBoundaryData& pb, double length, std::size_t n1,
                                                    double t_end, double snapshot_dt, double bump_amplitude);

}  // namespace outflow
