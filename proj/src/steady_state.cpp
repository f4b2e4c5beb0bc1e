#include "outflow/steady_state.hpp"

#include <algorithm>
#include <cmath>

#include "outflow/numerics.hpp"

namespace outflow {

void SteadyConfig::validate() const {
    solver.validate();
    if (!(t_max > 0)) throw ConfigError("invalid_steady", "t_max must be positive");
    if (!(period > 0)) throw ConfigError("invalid_steady", "shift period must be positive");
    if (!(beta >= 0)) throw ConfigError("invalid_beta", "weight exponent must be nonnegative");
    if (!(solver.steady_tol > 0)) throw ConfigError("invalid_steady", "steady tolerance must be positive");
}

void ContractionConfig::validate() const {
    solver.validate();
    if (!(t_end > 0) || !(sample_dt > 0) || sample_dt > t_end)
        throw ConfigError("invalid_contraction", "need 0 < sample_dt <= t_end");
    if (!(beta >= 0)) throw ConfigError("invalid_beta", "weight exponent must be nonnegative");
    if (!(step_tolerance >= 0)) throw ConfigError("invalid_contraction", "step tolerance must be nonnegative");
}

namespace {

double max_abs(const FieldState& s) {
    double m = 0;
    for (double v : s.rho) m = std::max(m, std::abs(v));
    for (const auto& c : s.u)
        for (double v : c) m = std::max(m, std::abs(v));
    for (double v : s.theta) m = std::max(m, std::abs(v));
    return m;
}

// Fourth-order derivatives: one-sided near the y1 ends, periodic in y2.
class FourthOrder {
public:
    explicit FourthOrder(const FlattenedGrid& g) : g_(g) {
        const std::size_t n = g.n1();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t s1 = std::min(i >= 2 ? i - 2 : 0, n - 5);
            std::vector<double> xs;
            for (std::size_t m = 0; m < 5; ++m) xs.push_back(g.h1() * static_cast<double>(s1 + m));
            first_.push_back({s1, fd_weights(g.y1(i), xs, 1)});

            std::size_t s2, len;
            if (i >= 2 && i + 2 < n) {
                s2 = i - 2;
                len = 5;
            } else {
                s2 = std::min(i >= 2 ? i - 2 : 0, n - 6);
                len = 6;
            }
            xs.clear();
            for (std::size_t m = 0; m < len; ++m) xs.push_back(g.h1() * static_cast<double>(s2 + m));
            second_.push_back({s2, fd_weights(g.y1(i), xs, 2)});
        }
    }

    Field d1(const Field& f) const { return along_y1(f, first_); }
    Field d11(const Field& f) const { return along_y1(f, second_); }

    Field d2(const Field& f) const {
        Field out = g_.zeros();
        if (g_.d() == 1) return out;
        const double h = g_.h2();
        for (std::size_t j = 0; j < g_.n2(); ++j)
            for (std::size_t i = 0; i < g_.n1(); ++i)
                out[g_.idx(i, j)] =
                    (f[at(i, j, -2)] - 8.0 * f[at(i, j, -1)] + 8.0 * f[at(i, j, 1)] - f[at(i, j, 2)]) / (12.0 * h);
        return out;
    }

    Field d22(const Field& f) const {
        Field out = g_.zeros();
        if (g_.d() == 1) return out;
        const double h = g_.h2();
        for (std::size_t j = 0; j < g_.n2(); ++j)
            for (std::size_t i = 0; i < g_.n1(); ++i)
                out[g_.idx(i, j)] = (-f[at(i, j, -2)] + 16.0 * f[at(i, j, -1)] - 30.0 * f[at(i, j, 0)] +
                                     16.0 * f[at(i, j, 1)] - f[at(i, j, 2)]) /
                                    (12.0 * h * h);
        return out;
    }

private:
    struct Weights {
        std::size_t start;
        std::vector<double> w;
    };

    std::size_t at(std::size_t i, std::size_t j, int off) const {
        const long n2 = static_cast<long>(g_.n2());
        const long jj = ((static_cast<long>(j) + off) % n2 + n2) % n2;
        return g_.idx(i, static_cast<std::size_t>(jj));
    }

    Field along_y1(const Field& f, const std::vector<Weights>& ws) const {
        Field out = g_.zeros();
        for (std::size_t j = 0; j < g_.n2(); ++j)
            for (std::size_t i = 0; i < g_.n1(); ++i) {
                const Weights& w = ws[i];
                double s = 0;
                for (std::size_t m = 0; m < w.w.size(); ++m) s += w.w[m] * f[g_.idx(w.start + m, j)];
                out[g_.idx(i, j)] = s;
            }
        return out;
    }

    const FlattenedGrid& g_;
    std::vector<Weights> first_, second_;
};

// Hat first and second derivatives of one field.
struct HatField {
    Field g1, g2, h11, h12, h22;
};

HatField hat_derivatives(const FourthOrder& D, const FlattenedGrid& g, const Field& f) {
    HatField h;
    const Field f1 = D.d1(f), f11 = D.d11(f);
    h.g1 = f1;
    h.h11 = f11;
    h.g2 = g.zeros();
    h.h12 = g.zeros();
    h.h22 = g.zeros();
    if (g.d() == 1) return h;
    const Field f2 = D.d2(f), f22 = D.d22(f), f12 = D.d1(f2);
    for (std::size_t j = 0; j < g.n2(); ++j) {
        const double p = g.dM()[j], q = g.d2M()[j];
        for (std::size_t i = 0; i < g.n1(); ++i) {
            const std::size_t k = g.idx(i, j);
            h.g2[k] = f2[k] - p * f1[k];
            h.h12[k] = f12[k] - p * f11[k];
            h.h22[k] = f22[k] - 2.0 * p * f12[k] + p * p * f11[k] - q * f1[k];
        }
    }
    return h;
}

double interior_norm(const Field& r, const FlattenedGrid& g) {
    const double w = g.h1() * (g.d() == 2 ? g.h2() : 1.0);
    double s = 0;
    for (std::size_t j = 0; j < g.n2(); ++j)
        for (std::size_t i = 1; i + 1 < g.n1(); ++i) s += w * r[g.idx(i, j)] * r[g.idx(i, j)];
    return std::sqrt(s);
}

}  // namespace

double StationaryResidual::total() const { return std::sqrt(mass * mass + momentum * momentum + energy * energy); }

StationaryResult march_to_steady(const FieldState& s0, const FlowProblem& p, const SteadyConfig& cfg) {
    cfg.validate();
    const SolverConfig& sc = cfg.solver;
    StationaryResult r;
    r.state = s0;
    FieldState& s = r.state;
    apply_boundary_conditions(s, p);

    r.final_rate = max_abs(rhs_eval(s, p, sc.convection));
    r.history_t.push_back(s.t);
    r.history_rate.push_back(r.final_rate);
    if (r.final_rate <= sc.steady_tol) {
        r.converged = true;
        return r;
    }

    Stepper stepper(p, sc.convection);
    FieldState prev, anchor = s;
    const double t_stop = s0.t + cfg.t_max;
    double next_mark = s0.t + cfg.period;
    std::size_t k = 0;
    while (s.t < t_stop * (1.0 - 1e-15)) {
        double dt = sc.fixed_dt > 0 ? sc.fixed_dt : stable_dt(s, p, sc.cfl);
        bool hit = false;
        if (s.t + dt >= next_mark * (1.0 - 1e-14)) {
            dt = next_mark - s.t;
            hit = true;
        }
        if (s.t + dt > t_stop) dt = t_stop - s.t;
        if (!(dt > 0)) break;
        prev = s;
        stepper.step(s, dt);
        ++r.steps;
        check_positivity(s, p, prev);
        r.final_rate = max_abs_difference(s, prev) / dt;
        if (hit) {
            s.t = next_mark;
            ++k;
            r.shift_series.push_back({k, s.t, weighted_distance(s, anchor, p.grid, cfg.beta)});
            r.history_t.push_back(s.t);
            r.history_rate.push_back(r.final_rate);
            anchor = s;
            next_mark = s0.t + static_cast<double>(k + 1) * cfg.period;
        }
        if (r.final_rate <= sc.steady_tol) {
            r.converged = true;
            break;
        }
    }
    if (r.history_t.back() != s.t) {
        r.history_t.push_back(s.t);
        r.history_rate.push_back(r.final_rate);
    }
    return r;
}

std::optional<DecayFit> fit_shift_series(const StationaryResult& r) {
    std::vector<double> k, v;
    for (const auto& sm : r.shift_series) {
        if (!(sm.value > 0)) break;
        k.push_back(static_cast<double>(sm.k));
        v.push_back(sm.value);
    }
    if (k.size() < 3) return std::nullopt;
    const std::size_t start = std::min(k.size() / 2, k.size() - 3);
    return fit_decay_rate(k, v, k[start], k.back());
}

StationaryResidual stationary_residual(const FieldState& s, const FlowProblem& p, int order, Convection conv) {
    const auto& g = p.grid;
    const GasParams& gas = p.gas;
    const double cv = gas.cv(), R = gas.R;
    const int d = g.d();
    StationaryResidual out;

    if (order == 2) {
        const FieldState rate = rhs_eval(s, p, conv);
        Field mass = rate.rho, energy(s.size());
        double mom2 = 0;
        for (int c = 0; c < d; ++c) {
            Field m(s.size());
            for (std::size_t k = 0; k < s.size(); ++k) m[k] = s.rho[k] * rate.u[c][k];
            const double n = interior_norm(m, g);
            mom2 += n * n;
        }
        for (std::size_t k = 0; k < s.size(); ++k) energy[k] = cv * s.rho[k] * rate.theta[k];
        out.mass = interior_norm(mass, g);
        out.momentum = std::sqrt(mom2);
        out.energy = interior_norm(energy, g);
        return out;
    }
    if (order != 4) throw ConfigError("invalid_order", "stationary residual order must be 2 or 4");

    const FourthOrder D(g);
    const HatField r = hat_derivatives(D, g, s.rho), th = hat_derivatives(D, g, s.theta);
    std::vector<HatField> u;
    for (int c = 0; c < d; ++c) u.push_back(hat_derivatives(D, g, s.u[c]));
    const double mu = gas.mu, ml = gas.mu + gas.lambda, lam = gas.lambda, kap = gas.kappa;

    Field mass = g.zeros(), energy = g.zeros();
    VectorField mom(d, g.zeros());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double rho = s.rho[k], T = s.theta[k], u1 = s.u[0][k], u2 = d == 2 ? s.u[1][k] : 0.0;
        auto conv_of = [&](const HatField& f) { return u1 * f.g1[k] + u2 * f.g2[k]; };
        const double div = u[0].g1[k] + (d == 2 ? u[1].g2[k] : 0.0);
        mass[k] = conv_of(r) + rho * div;

        const double grad_div1 = u[0].h11[k] + (d == 2 ? u[1].h12[k] : 0.0);
        const double lap1 = u[0].h11[k] + u[0].h22[k];
        mom[0][k] = rho * conv_of(u[0]) + R * (T * r.g1[k] + rho * th.g1[k]) - mu * lap1 - ml * grad_div1;
        double D2 = u[0].g1[k] * u[0].g1[k];
        if (d == 2) {
            const double grad_div2 = u[0].h12[k] + u[1].h22[k];
            const double lap2 = u[1].h11[k] + u[1].h22[k];
            mom[1][k] = rho * conv_of(u[1]) + R * (T * r.g2[k] + rho * th.g2[k]) - mu * lap2 - ml * grad_div2;
            const double d12 = 0.5 * (u[0].g2[k] + u[1].g1[k]);
            D2 += u[1].g2[k] * u[1].g2[k] + 2.0 * d12 * d12;
        }
        energy[k] = cv * rho * conv_of(th) + R * rho * T * div - kap * (th.h11[k] + th.h22[k]) - 2.0 * mu * D2 -
                    lam * div * div;
    }
    out.mass = interior_norm(mass, g);
    double m2 = 0;
    for (const auto& m : mom) {
        const double n = interior_norm(m, g);
        m2 += n * n;
    }
    out.momentum = std::sqrt(m2);
    out.energy = interior_norm(energy, g);

    MassBalance& b = out.balance;
    b.integral = integrate(mass, g);
    const double w2 = d == 2 ? g.h2() : 1.0;
    for (std::size_t j = 0; j < g.n2(); ++j) {
        const double pm = d == 2 ? g.dM()[j] : 0.0;
        auto flux = [&](std::size_t i) {
            const std::size_t k = g.idx(i, j);
            return s.rho[k] * (s.u[0][k] - (d == 2 ? pm * s.u[1][k] : 0.0));
        };
        b.flux_wall += w2 * flux(0);
        b.flux_far += w2 * flux(g.n1() - 1);
    }
    b.defect = std::abs(b.integral - (b.flux_far - b.flux_wall));
    return out;
}

ContractionReport two_solution_contraction(const FieldState& a0, const FieldState& b0, const FlowProblem& p,
                                           const Field& theta_ref, const ContractionConfig& cfg) {
    cfg.validate();
    ContractionReport rep;
    FieldState a = a0, b = b0;
    apply_boundary_conditions(a, p);
    apply_boundary_conditions(b, p);
    b.t = a.t;
    auto record = [&] {
        rep.t.push_back(a.t);
        rep.functional.push_back(
            contraction_functional(difference(a, b), contraction_weights(a, b, theta_ref), p.grid, cfg.beta, p.gas));
        rep.distance.push_back(weighted_distance(a, b, p.grid, cfg.beta));
    };
    record();

    Stepper sa(p, cfg.solver.convection), sb(p, cfg.solver.convection);
    const double t0 = a.t, t_stop = t0 + cfg.t_end;
    std::size_t k = 1;
    double next = t0 + cfg.sample_dt;
    FieldState prev_a, prev_b;
    while (a.t < t_stop * (1.0 - 1e-15)) {
        double dt = cfg.solver.fixed_dt > 0 ? cfg.solver.fixed_dt
                                            : std::min(stable_dt(a, p, cfg.solver.cfl), stable_dt(b, p, cfg.solver.cfl));
        const double target = std::min(next, t_stop);
        bool hit = false;
        if (a.t + dt >= target * (1.0 - 1e-14)) {
            dt = target - a.t;
            hit = true;
        }
        if (!(dt > 0)) break;
        prev_a = a;
        prev_b = b;
        sa.step(a, dt);
        sb.step(b, dt);
        check_positivity(a, p, prev_a);
        check_positivity(b, p, prev_b);
        if (hit) {
            a.t = b.t = target;
            record();
            ++k;
            next = t0 + static_cast<double>(k) * cfg.sample_dt;
        }
    }

    for (std::size_t i = 0; i + 1 < rep.functional.size(); ++i) {
        if (rep.functional[i] <= 0) continue;
        const double ratio = rep.functional[i + 1] / rep.functional[i];
        rep.max_step_ratio = std::max(rep.max_step_ratio, ratio);
    }
    rep.nonincreasing = rep.max_step_ratio <= 1.0 + cfg.step_tolerance;

    std::vector<double> t, v;
    for (std::size_t i = 0; i < rep.t.size(); ++i)
        if (rep.t[i] >= cfg.fit_from && rep.distance[i] > 0) {
            t.push_back(rep.t[i]);
            v.push_back(rep.distance[i]);
        }
    if (t.size() >= 3) rep.fit = fit_decay_rate(t, v, t.front(), t.back());
    return rep;
}

MultidirectionalReport multidirectional_audit(const FieldState& s, const FlattenedGrid& g) {
    MultidirectionalReport r;
    if (g.d() == 1) return r;
    for (double v : s.u[1]) r.max_tangential_velocity = std::max(r.max_tangential_velocity, std::abs(v));
    for (const auto& c : s.u)
        for (std::size_t i = 0; i < g.n1(); ++i) {
            double mean = 0;
            for (std::size_t j = 0; j < g.n2(); ++j) mean += c[g.idx(i, j)];
            mean /= static_cast<double>(g.n2());
            for (std::size_t j = 0; j < g.n2(); ++j)
                r.tangential_variation = std::max(r.tangential_variation, std::abs(c[g.idx(i, j)] - mean));
        }
    r.multidirectional =
        r.max_tangential_velocity > multidirectional_floor && r.tangential_variation > multidirectional_floor;
    return r;
}

}  // namespace outflow
