#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "outflow/boundary_extension.hpp"
#include "outflow/gas_model.hpp"
#include "outflow/geometry.hpp"
#include "outflow/pde_solver.hpp"
#include "outflow/planar_profile.hpp"

namespace outflow {

constexpr int config_schema_version = 1;
constexpr int output_schema_version = 1;

struct ShapeConfig {
    int dimension = 1;
    double period = 1.0;
    std::vector<TrigMode> modes;
};

enum class BoundaryKind { planar, normal_outflow, series };

struct BoundaryDataConfig {
    BoundaryKind kind = BoundaryKind::planar;
    std::vector<std::vector<TrigMode>> u_series;  // one list per velocity component
    std::vector<TrigMode> theta_series;
};

struct GridConfig {
    std::size_t n1 = 201;
    std::size_t n2 = 1;
    double length = 40.0;
};

struct ProfileConfig {
    double tol = 1e-8;
    ProfileOptions options;
};

struct DiagnosticsConfig {
    std::optional<double> beta;  // absent: alpha_fit / 2, or 0 when the profile is flat
    double shift_period = 1.0;
    double t_max = 300.0;
    double fit_from = 5.0;
    std::optional<double> fit_to;  // absent: end of the run
};

// Smooth bump added to the initial state: amplitude * cos^4 on |y1 - center| < width.
struct BumpConfig {
    std::string field = "u1";  // rho, u1, u2 or theta
    double amplitude = 1e-3;
    double center = 2.0;
    double width = 1.0;
};

struct InitialConfig {
    std::string base = "background";  // background or far_field
    std::vector<BumpConfig> bumps;
    double noise_amplitude = 0.0;  // seeded uniform noise, tapered to vanish at both ends
};

struct RunConfig {
    int schema_version = config_schema_version;
    GasParams gas;
    FarFieldState far_field;
    PlanarBoundaryData planar_boundary{-1.99, 1.0};
    ProfileConfig profile;
    ShapeConfig shape;
    BoundaryDataConfig boundary_data;
    GridConfig grid;
    SolverConfig solver;
    DiagnosticsConfig diagnostics;
    InitialConfig initial;
    std::uint64_t seed = 0;

    // Checks every field against the module invariants; throws ConfigError.
    void validate() const;
};

// Throws ConfigError("invalid_json"), ("unknown_key"), ("type_mismatch") or ("schema_version").
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& c);

// Markdown table of every key with its default and constraint.
std::string config_reference();

}  // namespace outflow
