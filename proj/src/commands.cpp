#include "outflow/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "outflow/audits.hpp"
#include "outflow/diagnostics.hpp"
#include "outflow/snapshot_io.hpp"
#include "outflow/steady_state.hpp"

namespace outflow {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

BoundaryShape make_shape(const RunConfig& c) {
    if (c.shape.dimension == 1) return BoundaryShape(1, 1.0, {});
    return BoundaryShape(2, c.shape.period, c.shape.modes);
}

BoundaryData make_boundary_data(const RunConfig& c, const FlattenedGrid& grid) {
    switch (c.boundary_data.kind) {
        case BoundaryKind::normal_outflow: return normal_outflow_boundary_data(grid, c.planar_boundary);
        case BoundaryKind::series:
            return series_boundary_data(grid, c.planar_boundary, c.boundary_data.u_series, c.boundary_data.theta_series);
        case BoundaryKind::planar: break;
    }
    return planar_boundary_data(grid, c.planar_boundary);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DomainError("io_error", "cannot write " + path.string());
    os << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json fit_json(const std::optional<DecayFit>& f) {
    if (!f) return nullptr;
    return {{"sigma", f->sigma}, {"C", f->C}, {"r2", f->r2}, {"count", f->count}};
}

json residual_json(const StationaryResidual& r) {
    return {{"mass", r.mass}, {"momentum", r.momentum}, {"energy", r.energy}, {"total", r.total()}};
}

std::optional<DecayFit> try_fit(const std::vector<double>& t, const std::vector<double>& v, double lo, double hi) {
    std::vector<double> tt, vv;
    for (std::size_t k = 0; k < t.size(); ++k)
        if (t[k] >= lo && t[k] <= hi && v[k] > 0) {
            tt.push_back(t[k]);
            vv.push_back(v[k]);
        }
    if (tt.size() < 3) return std::nullopt;
    return fit_decay_rate(tt, vv, lo, hi);
}

int cmd_profile(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    const PlanarProfile p = solve_profile(cfg.planar_boundary, cfg.far_field, cfg.gas, cfg.grid.length, cfg.grid.n1,
                                          cfg.profile.tol, cfg.profile.options);
    std::ostringstream csv;
    write_profile_csv(csv, p);
    write_text(out / "profile.csv", csv.str());
    const EndstateLinearization lin = endstate_jacobian(cfg.far_field, cfg.gas);
    json eig = json::array();
    for (const auto& e : lin.eigenvalues) eig.push_back({{"re", e.real()}, {"im", e.imag()}});
    json tails = json::array();
    if (p.alpha_fit)
        for (int k = 0; k <= 2; ++k) {
            const TailBound tb = profile_tail_bound(p, k);
            tails.push_back({{"order", k}, {"C", tb.C}, {"alpha", tb.alpha}});
        }
    json j = {{"schema_version", output_schema_version},
              {"delta_tilde", p.delta_tilde},
              {"fit_present", p.alpha_fit.has_value()},
              {"alpha_fit", p.alpha_fit ? json(*p.alpha_fit) : json(nullptr)},
              {"fit_r2", p.alpha_fit ? json(p.fit_r2) : json(nullptr)},
              {"mach", mach_number(cfg.far_field, cfg.gas)},
              {"endstate_eigenvalues", eig},
              {"slowest_rate", lin.slowest_rate},
              {"tail_bounds", tails},
              {"mass_flux", cfg.far_field.rho * cfg.far_field.u}};
    write_json(out / "profile_fit.json", j);
    log << "profile: delta " << p.delta_tilde << ", alpha_fit "
        << (p.alpha_fit ? std::to_string(*p.alpha_fit) : std::string("absent")) << "\n";
    return 0;
}

int cmd_evolve(const RunSetup& su, const fs::path& out, std::ostream& log) {
    const RunConfig& cfg = su.config;
    fs::create_directories(out / "snapshots");
    std::ostringstream csv;
    write_report_csv_header(csv);
    std::vector<double> ts, norms;
    std::size_t count = 0;
    auto observe = [&](const FieldState& s) {
        char name[32];
        std::snprintf(name, sizeof name, "snap_%05zu", count++);
        write_snapshot((out / "snapshots" / name).string(), s, su.grid);
        const EnergyReport r = energy_report(s, su.background, su.profile, su.problem, su.beta);
        write_report_csv_row(csv, r);
        ts.push_back(r.t);
        norms.push_back(r.weighted_norm);
    };
    try {
        evolve(initial_state(su), su.problem, cfg.solver, observe, false);
    } catch (const BlowUpError& e) {
        write_text(out / "diagnostics.csv", csv.str());
        write_snapshot((out / "last_good").string(), e.last_good(), su.grid);
        throw;
    }
    write_text(out / "diagnostics.csv", csv.str());
    const double hi = cfg.diagnostics.fit_to.value_or(ts.back());
    const json j = {{"schema_version", output_schema_version},
                    {"beta", su.beta},
                    {"snapshots", count},
                    {"t_end", ts.back()},
                    {"weighted_norm_initial", norms.front()},
                    {"weighted_norm_final", norms.back()},
                    {"decay_fit", fit_json(try_fit(ts, norms, cfg.diagnostics.fit_from, hi))}};
    write_json(out / "evolve_summary.json", j);
    log << "evolve: " << count << " snapshots, weighted norm " << norms.front() << " -> " << norms.back() << "\n";
    return 0;
}

int cmd_steady(const RunSetup& su, const fs::path& out, std::ostream& log) {
    const RunConfig& cfg = su.config;
    SteadyConfig sc;
    sc.solver = cfg.solver;
    sc.t_max = cfg.diagnostics.t_max;
    sc.period = cfg.diagnostics.shift_period;
    sc.beta = su.beta;
    const StationaryResult r = march_to_steady(initial_state(su), su.problem, sc);
    write_snapshot((out / "stationary").string(), r.state, su.grid);

    const StationaryResidual r2 = stationary_residual(r.state, su.problem, 2, cfg.solver.convection);
    const StationaryResidual r4 = stationary_residual(r.state, su.problem, 4);
    const Perturbation ps = extract_perturbation(r.state, su.background);
    const MultidirectionalReport md = multidirectional_audit(r.state, su.grid);
    json series = json::array();
    for (const auto& s : r.shift_series) series.push_back({{"k", s.k}, {"t", s.t}, {"value", s.value}});
    const auto sfit = fit_shift_series(r);
    json shift_fit = fit_json(sfit);
    if (sfit) shift_fit["ratio"] = std::exp(-sfit->sigma);
    json res4 = residual_json(r4);
    res4["mass_balance"] = {{"integral", r4.balance.integral},
                            {"flux_wall", r4.balance.flux_wall},
                            {"flux_far", r4.balance.flux_far},
                            {"defect", r4.balance.defect}};
    const json cert = {{"schema_version", output_schema_version},
                       {"converged", r.converged},
                       {"t_final", r.state.t},
                       {"steps", r.steps},
                       {"final_rate", r.final_rate},
                       {"steady_tol", cfg.solver.steady_tol},
                       {"beta", su.beta},
                       {"residual_order2", residual_json(r2)},
                       {"residual_order4", res4},
                       {"perturbation_weighted_norm", weighted_norm(ps, su.grid, su.beta)},
                       {"shift_series", series},
                       {"shift_fit", shift_fit},
                       {"multidirectional",
                        {{"max_tangential_velocity", md.max_tangential_velocity},
                         {"tangential_variation", md.tangential_variation},
                         {"multidirectional", md.multidirectional}}}};
    write_json(out / "certificate.json", cert);
    log << "steady: converged " << (r.converged ? "yes" : "no") << " at t = " << r.state.t << ", rate " << r.final_rate
        << "\n";
    if (!r.converged)
        throw DomainError("not_converged", "no stationary state within t_max; see certificate.json for the series");
    return 0;
}

int cmd_verify(const RunSetup& su, const fs::path& out, std::ostream& log) {
    const RunConfig& cfg = su.config;
    json audits = json::array();
    bool all = true;
    auto add = [&](const std::string& name, bool pass, json details) {
        audits.push_back({{"name", name}, {"pass", pass}, {"details", std::move(details)}});
        all = all && pass;
        log << "verify " << name << ": " << (pass ? "pass" : "FAIL") << "\n";
    };

    {
        const auto scan = f1_scan(cfg.gas, cfg.far_field.rho, cfg.far_field.theta, {0.5, 0.9, 0.99, 1.01, 1.5, 2.0});
        bool ok = true;
        json rows = json::array();
        for (const auto& e : scan) {
            ok = ok && e.sign_matches && e.determinant_matches;
            rows.push_back({{"mach", e.mach}, {"min_eigenvalue", e.min_eigenvalue}, {"determinant", e.determinant},
                            {"determinant_closed", e.determinant_closed}});
        }
        add("f1_scan", ok, rows);
    }
    {
        const ForcingScaling fs_ = forcing_scaling(cfg.gas, cfg.far_field, su.grid.shape(), cfg.grid.n1, cfg.grid.n2,
                                                   cfg.grid.length, {1e-3, 1e-2},
                                                   cfg.boundary_data.kind == BoundaryKind::normal_outflow);
        add("forcing_bound", fs_.bounded, {{"delta", fs_.delta}, {"ratio", fs_.ratio}});
    }
    {
        const double alpha = su.profile.alpha_fit.value_or(endstate_jacobian(cfg.far_field, cfg.gas).slowest_rate);
        const auto fam = hardy_family(su.grid, alpha);
        bool ok = true;
        json ratios = json::array();
        for (const auto& h : fam) {
            ok = ok && !h.flagged;
            ratios.push_back(h.ratio);
        }
        add("hardy", ok, {{"alpha", alpha}, {"ratios", ratios}});
    }
    {
        const BoundaryShape shape = cfg.shape.dimension == 2 && !su.grid.shape().is_flat()
                                        ? su.grid.shape()
                                        : BoundaryShape(2, 1.0, {{1, 0.0, 0.1}});
        const TransformOrder t = transform_order_test(shape);
        add("transform_order", t.order_ok && t.flat_bitwise, {{"ratios", t.ratios}, {"flat_bitwise", t.flat_bitwise}});
    }
    {
        PlanarBoundaryData pb = cfg.planar_boundary;
        if (pb.strength(cfg.far_field) == 0) pb.u_b = cfg.far_field.u + 0.01;
        const std::size_t n1 = std::max<std::size_t>(cfg.grid.n1 / 2 + 1, 21);
        const EnergyIdentityRefinement e =
            energy_identity_refinement(cfg.gas, cfg.far_field, pb, cfg.grid.length, n1, 1.0, 0.05, 1e-3);
        add("energy_identity", e.ratio >= 1.6 && e.dissipation_nonnegative,
            {{"coarse", e.coarse}, {"fine", e.fine}, {"ratio", e.ratio}, {"scale", e.scale}});
    }
    write_json(out / "verify.json", {{"schema_version", output_schema_version}, {"pass", all}, {"audits", audits}});
    if (!all) throw DomainError("audit_failed", "at least one audit failed; see verify.json");
    return 0;
}

int cmd_report(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    std::ifstream in(out / "diagnostics.csv");
    if (!in) throw ConfigError("missing_input", "report needs diagnostics.csv from a previous evolve run");
    std::string line;
    std::getline(in, line);
    std::vector<double> t, norm, energy;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() < 5) throw ConfigError("invalid_input", "malformed diagnostics.csv row");
        t.push_back(row[0]);
        norm.push_back(row[1]);
        energy.push_back(row[4]);
    }
    if (t.empty()) throw ConfigError("invalid_input", "diagnostics.csv has no rows");
    const double hi = cfg.diagnostics.fit_to.value_or(t.back());
    bool monotone = true;
    for (std::size_t k = 0; k + 1 < energy.size(); ++k) monotone = monotone && energy[k + 1] <= energy[k] * 1.05;
    const json j = {{"schema_version", output_schema_version},
                    {"samples", t.size()},
                    {"t_first", t.front()},
                    {"t_last", t.back()},
                    {"weighted_norm_first", norm.front()},
                    {"weighted_norm_last", norm.back()},
                    {"energy_nonincreasing", monotone},
                    {"decay_fit", fit_json(try_fit(t, norm, cfg.diagnostics.fit_from, hi))}};
    write_json(out / "report.json", j);
    log << "report: " << t.size() << " samples\n";
    return 0;
}

}  // namespace

std::unique_ptr<RunSetup> build_setup(const RunConfig& cfg) {
    cfg.validate();
    PlanarProfile prof = solve_profile(cfg.planar_boundary, cfg.far_field, cfg.gas, cfg.grid.length, cfg.grid.n1,
                                       cfg.profile.tol, cfg.profile.options);
    FlattenedGrid grid(make_shape(cfg), cfg.grid.n1, cfg.grid.length, cfg.grid.n2);
    const BoundaryData bd = make_boundary_data(cfg, grid);
    Extension ext = build_extension(bd, grid);
    BackgroundState bg = assemble_background(prof, ext, grid);
    double beta = 0.0;
    if (cfg.diagnostics.beta) {
        beta = *cfg.diagnostics.beta;
        validate_beta(beta, prof.alpha_fit);
    } else if (prof.alpha_fit) {
        beta = 0.5 * *prof.alpha_fit;
    }
    node_weights(grid, beta);
    FlowProblem problem(grid, cfg.gas, cfg.far_field, bd);
    return std::unique_ptr<RunSetup>(new RunSetup{cfg, std::move(prof), grid, std::move(ext), std::move(bg),
                                                  std::move(problem), beta});
}

FieldState initial_state(const RunSetup& su) {
    const RunConfig& cfg = su.config;
    const auto& g = su.grid;
    FieldState s = cfg.initial.base == "far_field" ? far_field_state(g, cfg.far_field) : background_state(su.background);
    for (const auto& b : cfg.initial.bumps) {
        Field* f = &s.rho;
        if (b.field == "u1") f = &s.u[0];
        if (b.field == "u2") f = &s.u[1];
        if (b.field == "theta") f = &s.theta;
        for (std::size_t j = 0; j < g.n2(); ++j)
            for (std::size_t i = 0; i < g.n1(); ++i) {
                const double y = g.y1(i);
                if (std::abs(y - b.center) < b.width)
                    (*f)[g.idx(i, j)] += b.amplitude * std::pow(std::cos(0.5 * std::numbers::pi * (y - b.center) / b.width), 4);
            }
    }
    if (cfg.initial.noise_amplitude > 0) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        auto taper = [&](std::size_t i) { return std::sin(std::numbers::pi * g.y1(i) / g.length()); };
        for (Field* f : {&s.rho, &s.theta})
            for (std::size_t k = 0; k < g.size(); ++k) (*f)[k] += cfg.initial.noise_amplitude * taper(k % g.n1()) * U(rng);
        for (auto& c : s.u)
            for (std::size_t k = 0; k < g.size(); ++k) c[k] += cfg.initial.noise_amplitude * taper(k % g.n1()) * U(rng);
    }
    apply_boundary_conditions(s, su.problem);
    return s;
}

json error_json(const Error& e) {
    const char* cls = e.error_class() == ErrorClass::config   ? "config"
                      : e.error_class() == ErrorClass::domain ? "domain"
                                                              : "blowup";
    return {{"schema_version", output_schema_version},
            {"error", {{"class", cls}, {"code", static_cast<int>(e.error_class())}, {"kind", e.kind()}, {"message", e.what()}}}};
}

int run_command(const std::string& name, const CommandOptions& opt, std::ostream& log, std::ostream& err) {
    const fs::path out(opt.out_dir);
    auto fail = [&](json j, int code) {
        err << j.dump() << "\n";
        std::error_code ec;
        fs::create_directories(out, ec);
        if (!ec) {
            std::ofstream os(out / "error.json");
            os << j.dump(2) << "\n";
        }
        return code;
    };
    try {
        if (name != "profile" && name != "evolve" && name != "steady" && name != "verify" && name != "report")
            throw ConfigError("unknown_command", "unknown subcommand '" + name + "'");
        RunConfig cfg = load_config(opt.config_path);
        if (opt.seed) cfg.seed = *opt.seed;
        fs::create_directories(out);
        std::error_code ec;
        fs::remove(out / "error.json", ec);
        write_json(out / "config_resolved.json", to_json(cfg));
        if (name == "profile") return cmd_profile(cfg, out, log);
        if (name == "report") return cmd_report(cfg, out, log);
        const auto su = build_setup(cfg);
        if (name == "evolve") return cmd_evolve(*su, out, log);
        if (name == "steady") return cmd_steady(*su, out, log);
        return cmd_verify(*su, out, log);
    } catch (const BlowUpError& e) {
        json j = error_json(e);
        j["error"]["time"] = e.time();
        j["error"]["node"] = e.node();
        j["error"]["last_snapshot"] = (out / "last_good").string();
        return fail(j, 3);
    } catch (const Error& e) {
        return fail(error_json(e), static_cast<int>(e.error_class()));
    } catch (const fs::filesystem_error& e) {
        return fail(error_json(DomainError("io_error", e.what())), 2);
    }
}

}  // namespace outflow
