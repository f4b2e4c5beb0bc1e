#include "outflow/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "outflow/errors.hpp"

namespace outflow {

using nlohmann::json;

namespace {

std::string kind_name(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::planar: return "planar";
        case BoundaryKind::normal_outflow: return "normal_outflow";
        case BoundaryKind::series: return "series";
    }
    return "planar";
}

BoundaryKind kind_from(const std::string& s) {
    if (s == "planar") return BoundaryKind::planar;
    if (s == "normal_outflow") return BoundaryKind::normal_outflow;
    if (s == "series") return BoundaryKind::series;
    throw ConfigError("invalid_boundary_data", "unknown boundary data kind '" + s + "'");
}

// Reads the keys of one object and rejects any it does not recognise.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError("type_mismatch", path_ + " must be an object");
    }

    template <class T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("type_mismatch", "wrong type for " + path_ + "." + key);
        }
    }

    template <class T>
    void read_optional(const char* key, std::optional<T>& out) {
        seen_.insert(key);
        if (!j_.contains(key) || j_.at(key).is_null()) return;
        T v{};
        read(key, v);
        out = v;
    }

    bool has(const char* key) {
        seen_.insert(key);
        return j_.contains(key);
    }
    const json& at(const char* key) const { return j_.at(key); }
    std::string path(const char* key) const { return path_ + "." + key; }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError("unknown_key", "unknown key " + path_ + "." + it.key());
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

std::vector<TrigMode> read_modes(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError("type_mismatch", path + " must be an array");
    std::vector<TrigMode> modes;
    for (std::size_t i = 0; i < j.size(); ++i) {
        Section s(j[i], path + "[" + std::to_string(i) + "]");
        TrigMode m;
        s.read("k", m.k);
        s.read("a", m.a);
        s.read("b", m.b);
        s.finish();
        modes.push_back(m);
    }
    return modes;
}

json modes_json(const std::vector<TrigMode>& modes) {
    json a = json::array();
    for (const auto& m : modes) a.push_back({{"k", m.k}, {"a", m.a}, {"b", m.b}});
    return a;
}

}  // namespace

void RunConfig::validate() const {
    if (schema_version != config_schema_version)
        throw ConfigError("schema_version", "unsupported schema_version " + std::to_string(schema_version));
    gas.validate();
    far_field.validate();
    if (!(planar_boundary.u_b < 0) || !(planar_boundary.theta_b > 0))
        throw ConfigError("invalid_boundary_data", "planar boundary data needs u_b < 0 and theta_b > 0");
    if (!(profile.tol > 0)) throw ConfigError("invalid_profile", "profile.tol must be positive");
    if (!(profile.options.delta_max > 0) || !(profile.options.rtol > 0) || !(profile.options.atol > 0))
        throw ConfigError("invalid_profile", "profile tolerances and delta_max must be positive");
    if (shape.dimension != 1 && shape.dimension != 2)
        throw ConfigError("invalid_shape", "shape.dimension must be 1 or 2");
    if (!(shape.period > 0)) throw ConfigError("invalid_shape", "shape.period must be positive");
    if (shape.modes.size() > BoundaryShape::max_modes)
        throw ConfigError("invalid_shape", "too many boundary shape modes");
    if (shape.dimension == 1 && !shape.modes.empty())
        throw ConfigError("invalid_shape", "a one-dimensional domain has a flat boundary");
    if (shape.dimension == 1 && boundary_data.kind == BoundaryKind::series)
        throw ConfigError("invalid_boundary_data", "series boundary data needs a two-dimensional domain");
    if (boundary_data.kind == BoundaryKind::series &&
        boundary_data.u_series.size() != static_cast<std::size_t>(shape.dimension))
        throw ConfigError("invalid_boundary_data", "u_series needs one list per velocity component");
    if (grid.n1 < 5) throw ConfigError("grid_too_small", "grid.n1 must be at least 5");
    if (shape.dimension == 2 && grid.n2 < 4) throw ConfigError("grid_too_small", "grid.n2 must be at least 4");
    if (shape.dimension == 1 && grid.n2 != 1) throw ConfigError("grid_too_small", "grid.n2 must be 1 in 1-D");
    if (!(grid.length > 0)) throw ConfigError("invalid_grid", "grid.length must be positive");
    solver.validate();
    if (diagnostics.beta && !(*diagnostics.beta >= 0))
        throw ConfigError("invalid_beta", "diagnostics.beta must be nonnegative");
    if (diagnostics.beta && *diagnostics.beta * grid.length > 500.0)
        throw ConfigError("beta_overflow", "diagnostics.beta * grid.length exceeds 500");
    if (!(diagnostics.shift_period > 0) || !(diagnostics.t_max > 0))
        throw ConfigError("invalid_diagnostics", "shift_period and t_max must be positive");
    if (diagnostics.fit_to && !(*diagnostics.fit_to > diagnostics.fit_from))
        throw ConfigError("invalid_diagnostics", "fit_to must exceed fit_from");
    if (initial.base != "background" && initial.base != "far_field")
        throw ConfigError("invalid_initial", "initial.base must be background or far_field");
    for (const auto& b : initial.bumps) {
        if (b.field != "rho" && b.field != "u1" && b.field != "u2" && b.field != "theta")
            throw ConfigError("invalid_initial", "bump field must be rho, u1, u2 or theta");
        if (b.field == "u2" && shape.dimension == 1)
            throw ConfigError("invalid_initial", "u2 bump needs a two-dimensional domain");
        if (!(b.width > 0)) throw ConfigError("invalid_initial", "bump width must be positive");
    }
    if (!(initial.noise_amplitude >= 0)) throw ConfigError("invalid_initial", "noise amplitude must be nonnegative");
}

RunConfig parse_config(const json& j) {
    RunConfig c;
    Section top(j, "config");
    top.read("schema_version", c.schema_version);
    if (c.schema_version != config_schema_version)
        throw ConfigError("schema_version", "unsupported schema_version " + std::to_string(c.schema_version));
    if (top.has("gas")) {
        Section s(top.at("gas"), "gas");
        s.read("mu", c.gas.mu);
        s.read("lambda", c.gas.lambda);
        s.read("kappa", c.gas.kappa);
        s.read("R", c.gas.R);
        s.read("gamma", c.gas.gamma);
        s.finish();
    }
    if (top.has("far_field")) {
        Section s(top.at("far_field"), "far_field");
        s.read("rho", c.far_field.rho);
        s.read("u", c.far_field.u);
        s.read("theta", c.far_field.theta);
        s.finish();
    }
    if (top.has("planar_boundary")) {
        Section s(top.at("planar_boundary"), "planar_boundary");
        s.read("u_b", c.planar_boundary.u_b);
        s.read("theta_b", c.planar_boundary.theta_b);
        s.finish();
    }
    if (top.has("profile")) {
        Section s(top.at("profile"), "profile");
        s.read("tol", c.profile.tol);
        s.read("delta_max", c.profile.options.delta_max);
        s.read("rtol", c.profile.options.rtol);
        s.read("atol", c.profile.options.atol);
        s.finish();
    }
    if (top.has("shape")) {
        Section s(top.at("shape"), "shape");
        s.read("dimension", c.shape.dimension);
        s.read("period", c.shape.period);
        if (s.has("modes")) c.shape.modes = read_modes(s.at("modes"), s.path("modes"));
        s.finish();
    }
    if (top.has("boundary_data")) {
        Section s(top.at("boundary_data"), "boundary_data");
        std::string kind = kind_name(c.boundary_data.kind);
        s.read("kind", kind);
        c.boundary_data.kind = kind_from(kind);
        if (s.has("u_series")) {
            const json& a = s.at("u_series");
            if (!a.is_array()) throw ConfigError("type_mismatch", "boundary_data.u_series must be an array");
            for (std::size_t i = 0; i < a.size(); ++i)
                c.boundary_data.u_series.push_back(read_modes(a[i], "boundary_data.u_series[" + std::to_string(i) + "]"));
        }
        if (s.has("theta_series")) c.boundary_data.theta_series = read_modes(s.at("theta_series"), s.path("theta_series"));
        s.finish();
    }
    if (top.has("grid")) {
        Section s(top.at("grid"), "grid");
        s.read("n1", c.grid.n1);
        s.read("n2", c.grid.n2);
        s.read("length", c.grid.length);
        s.finish();
    }
    if (top.has("solver")) {
        Section s(top.at("solver"), "solver");
        s.read("cfl", c.solver.cfl);
        s.read("t_end", c.solver.t_end);
        s.read("snapshot_dt", c.solver.snapshot_dt);
        s.read("steady_tol", c.solver.steady_tol);
        s.read("fixed_dt", c.solver.fixed_dt);
        std::string conv = to_string(c.solver.convection);
        s.read("convection", conv);
        c.solver.convection = convection_from_string(conv);
        s.finish();
    }
    if (top.has("diagnostics")) {
        Section s(top.at("diagnostics"), "diagnostics");
        s.read_optional("beta", c.diagnostics.beta);
        s.read("shift_period", c.diagnostics.shift_period);
        s.read("t_max", c.diagnostics.t_max);
        s.read("fit_from", c.diagnostics.fit_from);
        s.read_optional("fit_to", c.diagnostics.fit_to);
        s.finish();
    }
    if (top.has("initial")) {
        Section s(top.at("initial"), "initial");
        s.read("base", c.initial.base);
        s.read("noise_amplitude", c.initial.noise_amplitude);
        if (s.has("bumps")) {
            const json& a = s.at("bumps");
            if (!a.is_array()) throw ConfigError("type_mismatch", "initial.bumps must be an array");
            for (std::size_t i = 0; i < a.size(); ++i) {
                Section b(a[i], "initial.bumps[" + std::to_string(i) + "]");
                BumpConfig bc;
                b.read("field", bc.field);
                b.read("amplitude", bc.amplitude);
                b.read("center", bc.center);
                b.read("width", bc.width);
                b.finish();
                c.initial.bumps.push_back(bc);
            }
        }
        s.finish();
    }
    top.read("seed", c.seed);
    top.finish();
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("missing_config", "cannot open config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("invalid_json", std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

json to_json(const RunConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["gas"] = {{"mu", c.gas.mu}, {"lambda", c.gas.lambda}, {"kappa", c.gas.kappa}, {"R", c.gas.R}, {"gamma", c.gas.gamma}};
    j["far_field"] = {{"rho", c.far_field.rho}, {"u", c.far_field.u}, {"theta", c.far_field.theta}};
    j["planar_boundary"] = {{"u_b", c.planar_boundary.u_b}, {"theta_b", c.planar_boundary.theta_b}};
    j["profile"] = {{"tol", c.profile.tol},
                    {"delta_max", c.profile.options.delta_max},
                    {"rtol", c.profile.options.rtol},
                    {"atol", c.profile.options.atol}};
    j["shape"] = {{"dimension", c.shape.dimension}, {"period", c.shape.period}, {"modes", modes_json(c.shape.modes)}};
    json us = json::array();
    for (const auto& m : c.boundary_data.u_series) us.push_back(modes_json(m));
    j["boundary_data"] = {
        {"kind", kind_name(c.boundary_data.kind)}, {"u_series", us}, {"theta_series", modes_json(c.boundary_data.theta_series)}};
    j["grid"] = {{"n1", c.grid.n1}, {"n2", c.grid.n2}, {"length", c.grid.length}};
    j["solver"] = {{"cfl", c.solver.cfl},
                   {"t_end", c.solver.t_end},
                   {"snapshot_dt", c.solver.snapshot_dt},
                   {"steady_tol", c.solver.steady_tol},
                   {"fixed_dt", c.solver.fixed_dt},
                   {"convection", to_string(c.solver.convection)}};
    j["diagnostics"] = {{"beta", c.diagnostics.beta ? json(*c.diagnostics.beta) : json(nullptr)},
                        {"shift_period", c.diagnostics.shift_period},
                        {"t_max", c.diagnostics.t_max},
                        {"fit_from", c.diagnostics.fit_from},
                        {"fit_to", c.diagnostics.fit_to ? json(*c.diagnostics.fit_to) : json(nullptr)}};
    json bumps = json::array();
    for (const auto& b : c.initial.bumps)
        bumps.push_back({{"field", b.field}, {"amplitude", b.amplitude}, {"center", b.center}, {"width", b.width}});
    j["initial"] = {{"base", c.initial.base}, {"bumps", bumps}, {"noise_amplitude", c.initial.noise_amplitude}};
    j["seed"] = c.seed;
    return j;
}

std::string config_reference() {
    const RunConfig d;
    std::ostringstream os;
    os << "| key | default | constraint |\n|---|---|---|\n";
    auto row = [&](const std::string& k, const json& v, const std::string& c) {
        os << "| `" << k << "` | `" << v.dump() << "` | " << c << " |\n";
    };
    const json j = to_json(d);
    row("schema_version", j["schema_version"], "must equal " + std::to_string(config_schema_version));
    row("gas.mu", j["gas"]["mu"], "> 0");
    row("gas.lambda", j["gas"]["lambda"], "2 mu + 3 lambda >= 0 (3-D bulk viscosity convention)");
    row("gas.kappa", j["gas"]["kappa"], "> 0");
    row("gas.R", j["gas"]["R"], "> 0");
    row("gas.gamma", j["gas"]["gamma"], "> 1");
    row("far_field.rho", j["far_field"]["rho"], "> 0");
    row("far_field.u", j["far_field"]["u"], "< 0, supersonic for profile-based commands");
    row("far_field.theta", j["far_field"]["theta"], "> 0");
    row("planar_boundary.u_b", j["planar_boundary"]["u_b"], "< 0");
    row("planar_boundary.theta_b", j["planar_boundary"]["theta_b"], "> 0");
    row("profile.tol", j["profile"]["tol"], "> 0, absolute tail deviation allowed at y1 = L");
    row("profile.delta_max", j["profile"]["delta_max"], "> 0, largest admissible boundary strength");
    row("profile.rtol", j["profile"]["rtol"], "> 0");
    row("profile.atol", j["profile"]["atol"], "> 0");
    row("shape.dimension", j["shape"]["dimension"], "1 or 2");
    row("shape.period", j["shape"]["period"], "> 0, tangential period");
    row("shape.modes", j["shape"]["modes"], "list of {k, a, b}, at most 64, empty in 1-D");
    row("boundary_data.kind", j["boundary_data"]["kind"], "planar, normal_outflow or series");
    row("boundary_data.u_series", j["boundary_data"]["u_series"], "series kind: one mode list per component");
    row("boundary_data.theta_series", j["boundary_data"]["theta_series"], "series kind: temperature modes");
    row("grid.n1", j["grid"]["n1"], ">= 5");
    row("grid.n2", j["grid"]["n2"], "1 in 1-D, >= 4 in 2-D");
    row("grid.length", j["grid"]["length"], "> 0");
    row("solver.cfl", j["solver"]["cfl"], "> 0");
    row("solver.t_end", j["solver"]["t_end"], "> 0");
    row("solver.snapshot_dt", j["solver"]["snapshot_dt"], ">= 0, 0 keeps only the first and last states");
    row("solver.steady_tol", j["solver"]["steady_tol"], "> 0");
    row("solver.fixed_dt", j["solver"]["fixed_dt"], ">= 0, 0 selects the stable step");
    row("solver.convection", j["solver"]["convection"], "upwind1, upwind2 or upwind2_limited");
    row("diagnostics.beta", j["diagnostics"]["beta"], "null selects alpha_fit / 2; must not exceed alpha_fit / 2");
    row("diagnostics.shift_period", j["diagnostics"]["shift_period"], "> 0");
    row("diagnostics.t_max", j["diagnostics"]["t_max"], "> 0, steady marching limit");
    row("diagnostics.fit_from", j["diagnostics"]["fit_from"], "start of the decay-fit window");
    row("diagnostics.fit_to", j["diagnostics"]["fit_to"], "null selects the end of the run");
    row("initial.base", j["initial"]["base"], "background or far_field");
    row("initial.bumps", j["initial"]["bumps"], "list of {field, amplitude, center, width}");
    row("initial.noise_amplitude", j["initial"]["noise_amplitude"], ">= 0, seeded");
    row("seed", j["seed"], "unsigned integer, overridden by --seed");
    return os.str();
}

}  // namespace outflow
