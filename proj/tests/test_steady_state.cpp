#include <doctest.h>

#include <cmath>
#include <numbers>

#include "outflow/steady_state.hpp"

using namespace outflow;

namespace {

const GasParams gas{};

struct Setup {
    FlattenedGrid grid;
    PlanarProfile profile;
    Extension ext;
    BackgroundState bg;
    FlowProblem problem;

    Setup(const BoundaryShape& sh, const FarFieldState& ff, const PlanarBoundaryData& pb, std::size_t n1, double L,
          std::size_t n2, bool normal = false)
        : grid(sh, n1, L, n2),
          profile(solve_profile(pb, ff, gas, L, n1, 1e-3)),
          ext(build_extension(normal ? normal_outflow_boundary_data(grid, pb) : planar_boundary_data(grid, pb), grid)),
          bg(assemble_background(profile, ext, grid)),
          problem(grid, gas, ff, ext.data) {}
};

const FarFieldState far1{3, -2, 1};

Setup one_d(std::size_t n1 = 51) { return Setup(BoundaryShape(1, 1.0, {}), far1, {-1.99, 1.0}, n1, 10.0, 1); }

SteadyConfig steady_config(double period = 1.0) {
    SteadyConfig c;
    c.solver.cfl = 0.8;
    c.solver.convection = Convection::upwind2;
    c.period = period;
    c.beta = 0.5;
    return c;
}

void add_bump(FieldState& s, const FlattenedGrid& g, double amp, double center) {
    for (std::size_t i = 0; i < g.n1(); ++i) {
        const double y = g.y1(i);
        if (std::abs(y - center) < 1.0) s.u[0][i] += amp * std::pow(std::cos(0.5 * std::numbers::pi * (y - center)), 4);
    }
}

MultidirectionalReport curved_run(double amp, bool normal) {
    const FarFieldState ff{12, -2, 1};
    const Setup su(BoundaryShape(2, 1.0, {{1, 0.0, amp}}), ff, {-1.99, 1.0}, 41, 1.0, 8, normal);
    SteadyConfig c = steady_config(0.5);
    c.solver.steady_tol = 1e-8;
    const StationaryResult r = march_to_steady(background_state(su.bg), su.problem, c);
    REQUIRE(r.converged);
    return multidirectional_audit(r.state, su.grid);
}

}  // namespace

TEST_CASE("far-field start with reference data is already stationary") {
    const FarFieldState ff{1, -2, 1};
    const Setup su(BoundaryShape(2, 1.0, {}), ff, {ff.u, ff.theta}, 21, 5.0, 8);
    const FieldState s0 = far_field_state(su.grid, ff);
    const StationaryResult r = march_to_steady(s0, su.problem, steady_config());
    CHECK(r.converged);
    CHECK(r.steps == 0);
    CHECK(r.state.t == 0.0);
    CHECK(max_abs_difference(r.state, s0) == 0.0);
    for (int order : {2, 4}) {
        const StationaryResidual res = stationary_residual(r.state, su.problem, order);
        CHECK(res.total() <= 1e-12);
    }
    CHECK_THROWS_AS(stationary_residual(r.state, su.problem, 3), ConfigError);
    const MultidirectionalReport md = multidirectional_audit(r.state, su.grid);
    CHECK(md.max_tangential_velocity == 0.0);
    CHECK_FALSE(md.multidirectional);
}

TEST_CASE("1-D march converges with a geometric shift series and restarts idempotently") {
    const Setup su = one_d();
    FieldState s0 = background_state(su.bg);
    add_bump(s0, su.grid, 1e-3, 3.0);
    const SteadyConfig cfg = steady_config();
    const StationaryResult r = march_to_steady(s0, su.problem, cfg);
    REQUIRE(r.converged);
    CHECK(r.final_rate <= cfg.solver.steady_tol);

    const auto fit = fit_shift_series(r);
    REQUIRE(fit.has_value());
    CHECK(fit->sigma > 0);
    CHECK(fit->r2 >= 0.99);
    // after the transient the series does not grow
    for (std::size_t k = r.shift_series.size() / 2; k + 1 < r.shift_series.size(); ++k)
        CHECK(r.shift_series[k + 1].value <= 1.05 * r.shift_series[k].value);

    const Perturbation ps = extract_perturbation(r.state, su.bg);
    MESSAGE("stationary perturbation norm " << weighted_norm(ps, su.grid, cfg.beta));
    CHECK(weighted_norm(ps, su.grid, cfg.beta) < 1e-2);

    const StationaryResult again = march_to_steady(r.state, su.problem, cfg);
    CHECK(again.steps <= 1);
    CHECK(max_abs_difference(again.state, r.state) <= 1e-12);

    const StationaryResidual res2 = stationary_residual(r.state, su.problem, 2);
    CHECK(res2.total() <= 1e-7);
}

TEST_CASE("stationary state does not depend on the shift period") {
    const Setup su = one_d();
    FieldState s0 = background_state(su.bg);
    add_bump(s0, su.grid, 1e-3, 3.0);
    SteadyConfig a = steady_config(1.0), b = steady_config(0.5);
    a.solver.steady_tol = b.solver.steady_tol = 1e-11;
    const StationaryResult ra = march_to_steady(s0, su.problem, a);
    const StationaryResult rb = march_to_steady(s0, su.problem, b);
    REQUIRE(ra.converged);
    REQUIRE(rb.converged);
    CHECK(max_abs_difference(ra.state, rb.state) <= 1e-9);
    CHECK(rb.shift_series.size() > ra.shift_series.size());
}

TEST_CASE("fourth-order mass residual balances the boundary fluxes") {
    auto defect = [](std::size_t n1) {
        const Setup su = one_d(n1);
        const StationaryResult r = march_to_steady(background_state(su.bg), su.problem, steady_config());
        REQUIRE(r.converged);
        return stationary_residual(r.state, su.problem, 4).balance.defect;
    };
    const double a = defect(51), b = defect(101);
    MESSAGE("mass balance defect " << a << " -> " << b);
    CHECK(a < 1e-3);
    CHECK(a / b > 3.0);
}

TEST_CASE("two-solution contraction") {
    const Setup su = one_d();
    const FieldState base = background_state(su.bg);
    FieldState a = base, b = base;
    add_bump(a, su.grid, 2e-3, 2.0);
    add_bump(b, su.grid, -1e-3, 4.0);
    ContractionConfig cfg;
    cfg.solver.cfl = 0.8;
    cfg.solver.convection = Convection::upwind2;
    cfg.t_end = 15.0;
    cfg.sample_dt = 0.5;
    cfg.beta = 0.5;
    cfg.fit_from = 5.0;

    const ContractionReport same = two_solution_contraction(a, a, su.problem, su.bg.theta_profile, cfg);
    for (double v : same.functional) CHECK(v == 0.0);
    for (double v : same.distance) CHECK(v == 0.0);

    const ContractionReport ab = two_solution_contraction(a, b, su.problem, su.bg.theta_profile, cfg);
    const ContractionReport ba = two_solution_contraction(b, a, su.problem, su.bg.theta_profile, cfg);
    CHECK(ab.functional == ba.functional);
    CHECK(ab.t.size() == 31);
    CHECK(ab.nonincreasing);
    MESSAGE("max step ratio " << ab.max_step_ratio);
    REQUIRE(ab.fit.has_value());
    CHECK(ab.fit->sigma > 0);
}

TEST_CASE("curved boundary produces multidirectional stationary flow") {
    const MultidirectionalReport a = curved_run(0.05, true), b = curved_run(0.1, true);
    CHECK(a.max_tangential_velocity > 1e-6);
    CHECK(a.tangential_variation > 1e-6);
    CHECK(a.multidirectional);
    const double ratio = b.max_tangential_velocity / a.max_tangential_velocity;
    MESSAGE("tangential velocity ratio for doubled amplitude " << ratio);
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.3));

    const MultidirectionalReport planar = curved_run(0.1, false);
    CHECK(planar.multidirectional);
}

TEST_CASE("configuration checks") {
    SteadyConfig s;
    s.period = 0.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    ContractionConfig c;
    c.sample_dt = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}
