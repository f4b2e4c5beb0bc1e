#include "outflow/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace outflow {

FieldState zero_state(const FlattenedGrid& grid) {
    FieldState s;
    s.rho = grid.zeros();
    s.u.assign(grid.d(), grid.zeros());
    s.theta = grid.zeros();
    return s;
}

FieldState far_field_state(const FlattenedGrid& grid, const FarFieldState& ff) {
    FieldState s = zero_state(grid);
    std::fill(s.rho.begin(), s.rho.end(), ff.rho);
    std::fill(s.u[0].begin(), s.u[0].end(), ff.u);
    std::fill(s.theta.begin(), s.theta.end(), ff.theta);
    return s;
}

double max_abs_difference(const FieldState& a, const FieldState& b) {
    double m = 0;
    auto scan = [&](const Field& x, const Field& y) {
        for (std::size_t k = 0; k < x.size(); ++k) m = std::max(m, std::abs(x[k] - y[k]));
    };
    scan(a.rho, b.rho);
    for (std::size_t c = 0; c < a.u.size(); ++c) scan(a.u[c], b.u[c]);
    scan(a.theta, b.theta);
    return m;
}

std::string to_string(Convection c) {
    switch (c) {
        case Convection::upwind1: return "upwind1";
        case Convection::upwind2: return "upwind2";
        case Convection::upwind2_limited: return "upwind2_limited";
    }
    return "upwind1";
}

Convection convection_from_string(const std::string& s) {
    if (s == "upwind1") return Convection::upwind1;
    if (s == "upwind2") return Convection::upwind2;
    if (s == "upwind2_limited") return Convection::upwind2_limited;
    throw ConfigError("invalid_solver", "unknown convection scheme '" + s + "'");
}

void SolverConfig::validate() const {
    if (!(cfl > 0 && cfl < 1)) throw ConfigError("invalid_solver", "cfl must lie in (0, 1)");
    if (!(t_end >= 0)) throw ConfigError("invalid_solver", "t_end must be nonnegative");
    if (!(snapshot_dt >= 0)) throw ConfigError("invalid_solver", "snapshot cadence must be nonnegative");
    if (!(steady_tol > 0)) throw ConfigError("invalid_solver", "steady tolerance must be positive");
    if (!(fixed_dt >= 0)) throw ConfigError("invalid_solver", "fixed dt must be nonnegative");
}

FlowProblem::FlowProblem(FlattenedGrid grid_, GasParams gas_, FarFieldState ff_, const BoundaryData& bd)
    : grid(std::move(grid_)), gas(gas_), ff(ff_), u_b(bd.u_b), theta_b(bd.theta_b) {
    gas.validate();
    ff.validate();
    if (bd.d() != grid.d() || bd.n2() != grid.n2())
        throw DomainError("grid_mismatch", "boundary data does not match the grid");
}

void apply_boundary_conditions(FieldState& s, const FlowProblem& p) {
    const auto& G = p.grid;
    const std::size_t last = G.n1() - 1;
    for (std::size_t j = 0; j < G.n2(); ++j) {
        const std::size_t k0 = G.idx(0, j), kL = G.idx(last, j);
        for (int c = 0; c < G.d(); ++c) {
            s.u[c][k0] = p.u_b[c][j];
            s.u[c][kL] = c == 0 ? p.ff.u : 0.0;
        }
        s.theta[k0] = p.theta_b[j];
        s.rho[kL] = p.ff.rho;
        s.theta[kL] = p.ff.theta;
    }
}

namespace {

inline double minmod(double x, double y) {
    if (x * y <= 0) return 0.0;
    return std::abs(x) < std::abs(y) ? x : y;
}

// Upwinded first derivative along one line. has_m2 / has_p2 tell whether the
// second neighbour exists; without it the second-order variants fall back to centred.
inline double upwind(Convection c, double w, double fm2, double fm1, double f0, double fp1, double fp2, double ih,
                     bool has_m2, bool has_p2) {
    if (c == Convection::upwind1) return w > 0 ? (f0 - fm1) * ih : (fp1 - f0) * ih;
    if (w > 0) {
        if (!has_m2) return 0.5 * (fp1 - fm1) * ih;
        if (c == Convection::upwind2) return 0.5 * (3.0 * f0 - 4.0 * fm1 + fm2) * ih;
        return (f0 - fm1) * ih + 0.5 * ih * minmod(f0 - 2.0 * fm1 + fm2, fp1 - 2.0 * f0 + fm1);
    }
    if (!has_p2) return 0.5 * (fp1 - fm1) * ih;
    if (c == Convection::upwind2) return 0.5 * (-3.0 * f0 + 4.0 * fp1 - fp2) * ih;
    return (fp1 - f0) * ih - 0.5 * ih * minmod(fp2 - 2.0 * fp1 + f0, fp1 - 2.0 * f0 + fm1);
}

template <bool TwoD>
void rhs_kernel(const FieldState& s, const FlowProblem& P, Convection conv, FieldState& out) {
    const auto& G = P.grid;
    const auto& g = P.gas;
    const std::size_t n1 = G.n1(), n2 = G.n2();
    const double ih1 = 1.0 / G.h1(), ih1h = 0.5 * ih1, ih1s = ih1 * ih1;
    const double ih2 = TwoD ? 1.0 / G.h2() : 0.0, ih2h = 0.5 * ih2, ih2s = ih2 * ih2, ix = 0.25 * ih1 * ih2;
    const double mu = g.mu, ml = g.mu + g.lambda, lam = g.lambda, kap = g.kappa, R = g.R, cv = g.cv();

    const double* r = s.rho.data();
    const double* a = s.u[0].data();
    const double* b = TwoD ? s.u[1].data() : nullptr;
    const double* T = s.theta.data();
    double* rt = out.rho.data();
    double* at = out.u[0].data();
    double* bt = TwoD ? out.u[1].data() : nullptr;
    double* Tt = out.theta.data();

    for (std::size_t j = 0; j < n2; ++j) {
        std::size_t on = 0, os = 0, onn = 0, oss = 0;
        double p = 0, q = 0;
        if constexpr (TwoD) {
            const std::size_t jp = j + 1 == n2 ? 0 : j + 1, jm = j == 0 ? n2 - 1 : j - 1;
            const std::size_t jpp = jp + 1 == n2 ? 0 : jp + 1, jmm = jm == 0 ? n2 - 1 : jm - 1;
            on = jp * n1;
            os = jm * n1;
            onn = jpp * n1;
            oss = jmm * n1;
            p = G.dM()[j];
            q = G.d2M()[j];
        }
        const std::size_t o = j * n1;

        // y1 = 0: velocity and temperature prescribed, density transported out of the domain
        {
            const std::size_t k = o;
            const double r1 = conv == Convection::upwind1 ? (r[k + 1] - r[k]) * ih1
                                                          : (-3.0 * r[k] + 4.0 * r[k + 1] - r[k + 2]) * ih1h;
            double div = (-3.0 * a[k] + 4.0 * a[k + 1] - a[k + 2]) * ih1h;
            double conv_r = a[k] * r1;
            if constexpr (TwoD) {
                const double b1 = (-3.0 * b[k] + 4.0 * b[k + 1] - b[k + 2]) * ih1h;
                const double b2 = (b[on] - b[os]) * ih2h;
                div += b2 - p * b1;
                const double w2 = b[k];
                const double r2 = upwind(conv, w2, r[oss], r[os], r[k], r[on], r[onn], ih2, true, true);
                conv_r = (a[k] - p * b[k]) * r1 + w2 * r2;
                bt[k] = 0.0;
            }
            rt[k] = -conv_r - r[k] * div;
            at[k] = 0.0;
            Tt[k] = 0.0;
        }

        for (std::size_t i = 1; i + 1 < n1; ++i) {
            const std::size_t k = o + i;
            const bool hm2 = i >= 2, hp2 = i + 2 < n1;
            const double rm2 = hm2 ? r[k - 2] : 0, rp2 = hp2 ? r[k + 2] : 0;
            const double am2 = hm2 ? a[k - 2] : 0, ap2 = hp2 ? a[k + 2] : 0;
            const double Tm2 = hm2 ? T[k - 2] : 0, Tp2 = hp2 ? T[k + 2] : 0;

            const double rho = r[k], th = T[k], ua = a[k];
            const double r1 = (r[k + 1] - r[k - 1]) * ih1h;
            const double a1 = (a[k + 1] - a[k - 1]) * ih1h;
            const double T1 = (T[k + 1] - T[k - 1]) * ih1h;
            const double a11 = (a[k + 1] - 2.0 * ua + a[k - 1]) * ih1s;
            const double T11 = (T[k + 1] - 2.0 * th + T[k - 1]) * ih1s;

            if constexpr (!TwoD) {
                const double w1 = ua;
                const double cr = w1 * upwind(conv, w1, rm2, r[k - 1], rho, r[k + 1], rp2, ih1, hm2, hp2);
                const double ca = w1 * upwind(conv, w1, am2, a[k - 1], ua, a[k + 1], ap2, ih1, hm2, hp2);
                const double cT = w1 * upwind(conv, w1, Tm2, T[k - 1], th, T[k + 1], Tp2, ih1, hm2, hp2);
                const double div = a1;
                const double px = R * (th * r1 + rho * T1);
                const double visc = (mu + ml) * a11;
                rt[k] = -cr - rho * div;
                at[k] = -ca + (visc - px) / rho;
                const double heat = -R * rho * th * div + kap * T11 + 2.0 * mu * a1 * a1 + lam * div * div;
                Tt[k] = -cT + heat / (cv * rho);
            } else {
                const double ub = b[k];
                const double bm2 = hm2 ? b[k - 2] : 0, bp2 = hp2 ? b[k + 2] : 0;
                const std::size_t kn = on + i, ks = os + i;
                const double r2 = (r[kn] - r[ks]) * ih2h;
                const double a2 = (a[kn] - a[ks]) * ih2h;
                const double b1 = (b[k + 1] - b[k - 1]) * ih1h;
                const double b2 = (b[kn] - b[ks]) * ih2h;
                const double T2 = (T[kn] - T[ks]) * ih2h;
                const double a22 = (a[kn] - 2.0 * ua + a[ks]) * ih2s;
                const double b11 = (b[k + 1] - 2.0 * ub + b[k - 1]) * ih1s;
                const double b22 = (b[kn] - 2.0 * ub + b[ks]) * ih2s;
                const double T22 = (T[kn] - 2.0 * th + T[ks]) * ih2s;
                const double a12 = ((a[kn + 1] - a[kn - 1]) - (a[ks + 1] - a[ks - 1])) * ix;
                const double b12 = ((b[kn + 1] - b[kn - 1]) - (b[ks + 1] - b[ks - 1])) * ix;
                const double T12 = ((T[kn + 1] - T[kn - 1]) - (T[ks + 1] - T[ks - 1])) * ix;

                // hat first derivatives
                const double ga1 = a1, ga2 = a2 - p * a1;
                const double gb1 = b1, gb2 = b2 - p * b1;
                const double gr2 = r2 - p * r1, gT2 = T2 - p * T1;
                // hat second derivatives: H11 = f11, H12 = f12 - p f11, H22 = f22 - 2p f12 + p^2 f11 - q f1
                const double Ha12 = a12 - p * a11, Hb12 = b12 - p * b11;
                const double Ha22 = a22 - 2.0 * p * a12 + p * p * a11 - q * a1;
                const double Hb22 = b22 - 2.0 * p * b12 + p * p * b11 - q * b1;
                const double HT22 = T22 - 2.0 * p * T12 + p * p * T11 - q * T1;

                const double div = ga1 + gb2;
                const double w1 = ua - p * ub, w2 = ub;
                const double rS = r[ks], rN = r[kn], aS = a[ks], aN = a[kn], bS = b[ks], bN = b[kn];
                const double TS = T[ks], TN = T[kn];
                const double cr = w1 * upwind(conv, w1, rm2, r[k - 1], rho, r[k + 1], rp2, ih1, hm2, hp2) +
                                  w2 * upwind(conv, w2, r[oss + i], rS, rho, rN, r[onn + i], ih2, true, true);
                const double ca = w1 * upwind(conv, w1, am2, a[k - 1], ua, a[k + 1], ap2, ih1, hm2, hp2) +
                                  w2 * upwind(conv, w2, a[oss + i], aS, ua, aN, a[onn + i], ih2, true, true);
                const double cb = w1 * upwind(conv, w1, bm2, b[k - 1], ub, b[k + 1], bp2, ih1, hm2, hp2) +
                                  w2 * upwind(conv, w2, b[oss + i], bS, ub, bN, b[onn + i], ih2, true, true);
                const double cT = w1 * upwind(conv, w1, Tm2, T[k - 1], th, T[k + 1], Tp2, ih1, hm2, hp2) +
                                  w2 * upwind(conv, w2, T[oss + i], TS, th, TN, T[onn + i], ih2, true, true);

                const double px1 = R * (th * r1 + rho * T1);
                const double px2 = R * (th * gr2 + rho * gT2);
                const double visc1 = mu * (a11 + Ha22) + ml * (a11 + Hb12);
                const double visc2 = mu * (b11 + Hb22) + ml * (Ha12 + Hb22);
                const double d12 = 0.5 * (ga2 + gb1);
                const double dd = ga1 * ga1 + gb2 * gb2 + 2.0 * d12 * d12;

                rt[k] = -cr - rho * div;
                at[k] = -ca + (visc1 - px1) / rho;
                bt[k] = -cb + (visc2 - px2) / rho;
                const double heat = -R * rho * th * div + kap * (T11 + HT22) + 2.0 * mu * dd + lam * div * div;
                Tt[k] = -cT + heat / (cv * rho);
            }
        }

        const std::size_t kL = o + n1 - 1;
        rt[kL] = 0.0;
        at[kL] = 0.0;
        if constexpr (TwoD) bt[kL] = 0.0;
        Tt[kL] = 0.0;
    }
}

}  // namespace

void rhs_eval(const FieldState& s, const FlowProblem& p, Convection conv, FieldState& out) {
    if (out.size() != s.size() || out.d() != s.d()) out = zero_state(p.grid);
    if (p.grid.d() == 1)
        rhs_kernel<false>(s, p, conv, out);
    else
        rhs_kernel<true>(s, p, conv, out);
    out.t = s.t;
}

FieldState rhs_eval(const FieldState& s, const FlowProblem& p, Convection conv) {
    FieldState out = zero_state(p.grid);
    rhs_eval(s, p, conv, out);
    return out;
}

double stable_dt(const FieldState& s, const FlowProblem& p, double cfl) {
    if (!(cfl > 0)) throw ConfigError("invalid_solver", "cfl must be positive");
    const auto& G = p.grid;
    const auto& g = p.gas;
    const double h1 = G.h1(), h2 = G.d() == 2 ? G.h2() : h1, h = std::min(h1, h2);
    const double cv = g.cv(), mu1 = g.mu1();
    double dt = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < G.n2(); ++j) {
        // Gershgorin bound of the discrete hat Laplacian; equals 4/h^2 in 1-D
        double lam = 4.0 / (h1 * h1);
        if (G.d() == 2) {
            const double pm = std::abs(G.dM()[j]), qm = std::abs(G.d2M()[j]);
            lam = 4.0 * (1.0 + pm * pm) / (h1 * h1) + 4.0 / (h2 * h2) + 2.0 * pm / (h1 * h2) + qm / h1;
        }
        for (std::size_t i = 0; i < G.n1(); ++i) {
            const std::size_t k = G.idx(i, j);
            double speed = 0;
            for (int c = 0; c < G.d(); ++c) speed += s.u[c][k] * s.u[c][k];
            speed = std::sqrt(speed) + sound_speed(s.theta[k], g);
            const double nu = std::max(mu1 / s.rho[k], g.kappa / (cv * s.rho[k]));
            // convective and viscous rates add, so neither limit is approached alone
            dt = std::min(dt, 1.0 / (speed / h + 0.5 * nu * lam));
        }
    }
    return cfl * dt;
}

void check_positivity(const FieldState& s, const FlowProblem& p, const FieldState& last_good) {
    for (std::size_t k = 0; k < s.size(); ++k) {
        bool ok = s.rho[k] > 0 && s.theta[k] > 0 && std::isfinite(s.rho[k]) && std::isfinite(s.theta[k]);
        for (const auto& u : s.u) ok = ok && std::isfinite(u[k]);
        if (!ok) {
            const std::size_t i = k % p.grid.n1(), j = k / p.grid.n1();
            throw BlowUpError("positivity lost at node (" + std::to_string(i) + ", " + std::to_string(j) +
                                  ") near t = " + std::to_string(s.t),
                              last_good, s.t, k);
        }
    }
}

Stepper::Stepper(const FlowProblem& p, Convection conv)
    : p_(p), conv_(conv), k_(zero_state(p.grid)), stage_(zero_state(p.grid)) {}

void Stepper::step(FieldState& s, double dt) {
    start_ = s;
    auto axpy = [](Field& y, const Field& x, const Field& dx, double h) {
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = x[k] + h * dx[k];
    };
    auto average = [](Field& y, const Field& x0, const Field& x1, const Field& dx, double h) {
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = 0.5 * (x0[k] + (x1[k] + h * dx[k]));
    };
    rhs_eval(s, p_, conv_, k_);
    axpy(stage_.rho, s.rho, k_.rho, dt);
    for (std::size_t c = 0; c < s.u.size(); ++c) axpy(stage_.u[c], s.u[c], k_.u[c], dt);
    axpy(stage_.theta, s.theta, k_.theta, dt);
    stage_.t = s.t + dt;
    apply_boundary_conditions(stage_, p_);
    check_positivity(stage_, p_, start_);

    rhs_eval(stage_, p_, conv_, k_);
    average(s.rho, start_.rho, stage_.rho, k_.rho, dt);
    for (std::size_t c = 0; c < s.u.size(); ++c) average(s.u[c], start_.u[c], stage_.u[c], k_.u[c], dt);
    average(s.theta, start_.theta, stage_.theta, k_.theta, dt);
    s.t = start_.t + dt;
    apply_boundary_conditions(s, p_);
    check_positivity(s, p_, start_);
}

FieldState step(const FieldState& s, const FlowProblem& p, double dt, Convection conv) {
    Stepper st(p, conv);
    FieldState out = s;
    st.step(out, dt);
    return out;
}

Trajectory evolve(const FieldState& s0, const FlowProblem& p, const SolverConfig& cfg, const Observer& obs,
                  bool keep_snapshots) {
    cfg.validate();
    Trajectory tr;
    FieldState s = s0;
    apply_boundary_conditions(s, p);
    check_positivity(s, p, s0);
    Stepper stepper(p, cfg.convection);
    auto record = [&](const FieldState& st) {
        if (keep_snapshots) tr.snapshots.push_back(st);
        if (obs) obs(st);
    };
    record(s);
    const double t0 = s.t, t_end = cfg.t_end;
    std::size_t next = 1;
    auto next_snap = [&]() {
        return cfg.snapshot_dt > 0 ? t0 + cfg.snapshot_dt * static_cast<double>(next)
                                   : std::numeric_limits<double>::infinity();
    };
    while (s.t < t_end) {
        double dt = cfg.fixed_dt > 0 ? cfg.fixed_dt : stable_dt(s, p, cfg.cfl);
        const double target = std::min(next_snap(), t_end);
        bool hit = false;
        if (s.t + dt >= target * (1.0 - 1e-14)) {
            dt = target - s.t;
            hit = true;
        }
        if (dt <= 0) break;
        stepper.step(s, dt);
        ++tr.steps;
        if (hit) {
            s.t = target;
            if (target == next_snap()) {
                ++next;
                if (target < t_end) record(s);
            }
        }
    }
    record(s);
    tr.final_state = s;
    return tr;
}

}  // namespace outflow
