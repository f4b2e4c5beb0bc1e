#include "outflow/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace outflow {

namespace {

struct HatFirst {
    double g1, g2;
};

HatFirst hat_first(const Stencil& st, const Field& f, std::size_t i, std::size_t j, double p) {
    const double a = st.d1(f, i, j);
    return {a, st.d2(f, i, j) - p * a};
}

// squared Frobenius norm of the hat Hessian
double hat_hessian_sq(const Stencil& st, const Field& f, std::size_t i, std::size_t j, double p, double q) {
    const double f11 = st.d11(f, i, j);
    if (st.g.d() == 1) return f11 * f11;
    const double f1 = st.d1(f, i, j), f12 = st.d12(f, i, j), f22 = st.d22(f, i, j);
    const double h12 = f12 - p * f11, h22 = f22 - 2.0 * p * f12 + p * p * f11 - q * f1;
    return f11 * f11 + 2.0 * h12 * h12 + h22 * h22;
}

double slope(const Field& f, const FlattenedGrid& grid, std::size_t i) {
    return Stencil{grid}.d1(f, i, 0);
}

double trace_norm_sq(const Field& f, const FlattenedGrid& grid) {
    const double w = grid.d() == 2 ? grid.h2() : 1.0;
    double s = 0;
    for (std::size_t j = 0; j < grid.n2(); ++j) s += w * f[grid.idx(0, j)] * f[grid.idx(0, j)];
    return s;
}

}  // namespace

double eta(double r) {
    if (!(r > 0)) throw DomainError("nonpositive_state", "eta needs a positive argument");
    // log1p keeps the quadratic behaviour near r = 1 accurate
    const double x = r - 1.0;
    return x - std::log1p(x);
}

Field node_weights(const FlattenedGrid& grid, double beta) {
    if (!(beta >= 0)) throw ConfigError("invalid_beta", "weight exponent must be nonnegative");
    if (beta * grid.length() > 500.0)
        throw ConfigError("beta_overflow", "beta * L exceeds 500; the weight would overflow");
    const auto w1 = trapezoid_weights(grid.n1(), grid.h1());
    const double w2 = grid.d() == 2 ? grid.h2() : 1.0;
    Field w(grid.size());
    for (std::size_t j = 0; j < grid.n2(); ++j)
        for (std::size_t i = 0; i < grid.n1(); ++i)
            w[grid.idx(i, j)] = beta == 0.0 ? w1[i] * w2 : w1[i] * w2 * std::exp(beta * grid.y1(i));
    return w;
}

void validate_beta(double beta, const std::optional<double>& alpha_fit) {
    if (!(beta >= 0)) throw ConfigError("invalid_beta", "weight exponent must be nonnegative");
    if (beta == 0) return;
    if (!alpha_fit) throw ConfigError("beta_too_large", "a positive weight needs a fitted profile decay rate");
    if (beta > 0.5 * *alpha_fit * (1.0 + 1e-12))
        throw ConfigError("beta_too_large", "beta = " + std::to_string(beta) + " exceeds alpha_fit / 2 = " +
                                                std::to_string(0.5 * *alpha_fit));
}

double integrate(const Field& f, const FlattenedGrid& grid, double beta) {
    const Field w = node_weights(grid, beta);
    double s = 0;
    for (std::size_t k = 0; k < f.size(); ++k) s += w[k] * f[k];
    return s;
}

double weighted_norm(const Field& f, const FlattenedGrid& grid, double beta) {
    const Field w = node_weights(grid, beta);
    double s = 0;
    for (std::size_t k = 0; k < f.size(); ++k) s += w[k] * f[k] * f[k];
    return std::sqrt(s);
}

double weighted_norm(const Perturbation& p, const FlattenedGrid& grid, double beta) {
    const Field w = node_weights(grid, beta);
    double s = 0;
    for (std::size_t k = 0; k < p.phi.size(); ++k) {
        double v = p.phi[k] * p.phi[k] + p.zeta[k] * p.zeta[k];
        for (const auto& c : p.psi) v += c[k] * c[k];
        s += w[k] * v;
    }
    return std::sqrt(s);
}

Perturbation difference(const FieldState& a, const FieldState& b) {
    Perturbation p;
    const std::size_t n = a.size();
    p.phi.resize(n);
    p.zeta.resize(n);
    p.psi.assign(a.u.size(), Field(n));
    for (std::size_t k = 0; k < n; ++k) {
        p.phi[k] = a.rho[k] - b.rho[k];
        p.zeta[k] = a.theta[k] - b.theta[k];
        for (std::size_t c = 0; c < a.u.size(); ++c) p.psi[c][k] = a.u[c][k] - b.u[c][k];
    }
    return p;
}

double weighted_distance(const FieldState& a, const FieldState& b, const FlattenedGrid& grid, double beta) {
    return weighted_norm(difference(a, b), grid, beta);
}

EnergyReference background_reference(const BackgroundState& bg) {
    return {bg.rho, bg.u, bg.theta_profile, bg.theta};
}

EnergyReference stationary_reference(const FieldState& stationary) {
    return {stationary.rho, stationary.u, stationary.theta, stationary.theta};
}

EnergyForm energy_form(const FieldState& s, const EnergyReference& ref, const FlattenedGrid& grid,
                       const GasParams& g) {
    EnergyForm e;
    e.density.resize(s.size());
    const double R = g.R, cv = g.cv();
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double rho = s.rho[k], th = s.theta[k];
        if (!(rho > 0 && th > 0)) throw DomainError("nonpositive_state", "energy form needs a positive state");
        double kin = 0;
        for (std::size_t c = 0; c < s.u.size(); ++c) {
            const double d = s.u[c][k] - ref.u[c][k];
            kin += d * d;
        }
        e.density[k] = R * rho * ref.theta_density[k] * eta(ref.rho[k] / rho) + 0.5 * rho * kin +
                       cv * rho * ref.theta_thermal[k] * eta(th / ref.theta_thermal[k]);
    }
    e.integral = integrate(e.density, grid);
    return e;
}

EnergyNorms energy_norms(const Perturbation& p, const FlattenedGrid& grid, double beta) {
    const Field w = node_weights(grid, beta), w0 = node_weights(grid, 0.0);
    const Stencil st{grid};
    std::vector<const Field*> comps{&p.phi, &p.zeta};
    for (const auto& c : p.psi) comps.push_back(&c);
    double wl2 = 0, l2 = 0, grad = 0;
    for (std::size_t j = 0; j < grid.n2(); ++j) {
        const double dm = grid.d() == 2 ? grid.dM()[j] : 0.0;
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            const std::size_t k = grid.idx(i, j);
            for (const Field* f : comps) {
                const double v = (*f)[k];
                wl2 += w[k] * v * v;
                l2 += w0[k] * v * v;
                const HatFirst hg = hat_first(st, *f, i, j, dm);
                grad += w0[k] * (hg.g1 * hg.g1 + hg.g2 * hg.g2);
            }
        }
    }
    return {wl2 + l2, wl2 + l2 + grad};
}

DissipationNorms dissipation_norms(const FieldState& s, const BackgroundState& bg, const FlowProblem& p,
                                   double beta, Convection conv) {
    const auto& grid = p.grid;
    const Perturbation pert = extract_perturbation(s, bg);
    const FieldState rate = rhs_eval(s, p, conv);
    const Field w = node_weights(grid, beta), w0 = node_weights(grid, 0.0);
    const Stencil st{grid};
    const int d = grid.d();

    // material derivative of phi; the background is steady so phi_t = rho_t
    Field dphi(grid.size());
    for (std::size_t j = 0; j < grid.n2(); ++j) {
        const double dm = d == 2 ? grid.dM()[j] : 0.0;
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            const std::size_t k = grid.idx(i, j);
            const HatFirst hg = hat_first(st, pert.phi, i, j, dm);
            dphi[k] = rate.rho[k] + s.u[0][k] * hg.g1 + (d == 2 ? s.u[1][k] * hg.g2 : 0.0);
        }
    }

    double wl2 = 0, wgrad = 0, dphi2 = 0, grad_phi = 0, hess = 0, grad_dphi = 0, time2 = 0;
    for (std::size_t j = 0; j < grid.n2(); ++j) {
        const double dm = d == 2 ? grid.dM()[j] : 0.0, d2m = d == 2 ? grid.d2M()[j] : 0.0;
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            const std::size_t k = grid.idx(i, j);
            double v = pert.phi[k] * pert.phi[k] + pert.zeta[k] * pert.zeta[k];
            for (const auto& c : pert.psi) v += c[k] * c[k];
            wl2 += w[k] * v;

            std::vector<const Field*> smooth{&pert.zeta};
            for (const auto& c : pert.psi) smooth.push_back(&c);
            for (const Field* f : smooth) {
                const HatFirst hg = hat_first(st, *f, i, j, dm);
                wgrad += w[k] * (hg.g1 * hg.g1 + hg.g2 * hg.g2);
                grad_phi += w0[k] * (hg.g1 * hg.g1 + hg.g2 * hg.g2);
                hess += w0[k] * hat_hessian_sq(st, *f, i, j, dm, d2m);
            }
            const HatFirst gp = hat_first(st, pert.phi, i, j, dm);
            grad_phi += w0[k] * (gp.g1 * gp.g1 + gp.g2 * gp.g2);
            dphi2 += w0[k] * dphi[k] * dphi[k];
            const HatFirst gd = hat_first(st, dphi, i, j, dm);
            grad_dphi += w0[k] * (gd.g1 * gd.g1 + gd.g2 * gd.g2);
            double tv = rate.theta[k] * rate.theta[k];
            for (const auto& c : rate.u) tv += c[k] * c[k];
            time2 += w0[k] * tv;
        }
    }
    DissipationNorms out;
    out.d0 = beta * wl2 + wgrad + dphi2 + trace_norm_sq(pert.phi, grid);
    out.d1 = out.d0 + grad_phi + hess + dphi2 + grad_dphi + time2;
    return out;
}

DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& v, double t_lo, double t_hi) {
    if (t.size() != v.size()) throw DomainError("too_few_samples", "time and value series differ in length");
    std::vector<double> x, y;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] < t_lo || t[k] > t_hi) continue;
        if (!(v[k] > 0)) throw DomainError("nonpositive_series", "decay fit needs positive values");
        x.push_back(t[k]);
        y.push_back(std::log(v[k]));
    }
    if (x.size() < 2) throw DomainError("too_few_samples", "decay fit window holds fewer than two samples");
    const LinearFit f = linear_fit(x, y);
    return {-f.slope, std::exp(f.intercept), f.r2, f.count};
}

ContractionWeights contraction_weights(const FieldState& a, const FieldState& b, const Field& theta_ref) {
    ContractionWeights w;
    w.rho_star.resize(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) w.rho_star[k] = 0.5 * (a.rho[k] + b.rho[k]);
    w.theta_ref = theta_ref;
    return w;
}

double contraction_functional(const Perturbation& diff, const ContractionWeights& w, const FlattenedGrid& grid,
                              double beta, const GasParams& g) {
    const Field nw = node_weights(grid, beta);
    const double R = g.R, cv = g.cv();
    double s = 0;
    for (std::size_t k = 0; k < diff.phi.size(); ++k) {
        const double rs = w.rho_star[k], th = w.theta_ref[k];
        double psi2 = 0;
        for (const auto& c : diff.psi) psi2 += c[k] * c[k];
        s += nw[k] * (R * th / rs * diff.phi[k] * diff.phi[k] + rs * psi2 + cv / th * rs * diff.zeta[k] * diff.zeta[k]);
    }
    return 0.5 * s;
}

EnergyBudget energy_budget(const FieldState& s, const PlanarProfile& profile, const FlattenedGrid& grid,
                           const GasParams& g) {
    if (grid.d() != 1) throw DomainError("unsupported_geometry", "the energy budget is one-dimensional");
    if (profile.size() != grid.n1()) throw DomainError("grid_mismatch", "profile samples do not match the grid");
    const ProfileDerivatives pd = profile_derivatives(profile);
    const std::size_t n = grid.n1();
    const double R = g.R, cv = g.cv(), mu1 = g.mu1(), kap = g.kappa;

    Field phi(n), psi(n), zeta(n);
    for (std::size_t i = 0; i < n; ++i) {
        phi[i] = s.rho[i] - profile.rho[i];
        psi[i] = s.u[0][i] - profile.u1[i];
        zeta[i] = s.theta[i] - profile.theta[i];
    }
    Field energy(n), diss(n), rem(n), flux(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rt = profile.rho[i], ut = profile.u1[i], tt = profile.theta[i];
        const double rp = pd.rho_x[i], up = pd.u_x[i], tp = pd.theta_x[i];
        const double ph = phi[i], ps = psi[i], ze = zeta[i];
        const double rho = s.rho[i], u = s.u[0][i], th = s.theta[i];
        if (!(rho > 0 && th > 0)) throw DomainError("nonpositive_state", "energy budget needs a positive state");
        const double psx = slope(psi, grid, i), zex = slope(zeta, grid, i), thx = tp + zex;

        const double er = eta(rt / rho), et = eta(th / tt);
        energy[i] = R * rho * tt * er + 0.5 * rho * ps * ps + cv * rho * tt * et;
        diss[i] = mu1 * psx * psx + kap * zex * zex / th;
        flux[i] = -u * energy[i] - R * (tt * ph + rho * ze) * ps + mu1 * ps * psx + kap * ze * zex / th;

        const double f = -ps * rp - ph * up;
        const double gm = -rho * ps * up - ph * ut * up - R * ze * rp - R * ph * tp;
        const double h = -cv * rho * ps * tp - cv * ph * ut * tp - R * rt * ze * up - R * ph * th * up +
                         2.0 * mu1 * psx * up;
        const double inv_t_x = -tp / (tt * tt);
        rem[i] = R * tt * ph / rho * f + ps * gm + ze / th * h + R * ph * ps * tp + R * ze * ps * rp +
                 R * rho * er * u * tp - R * tt * ph * ph * u * rp / (rho * rt) + cv * rho * et * u * tp +
                 cv * rho * (tt / th) * ze * ze * u * inv_t_x + kap * ze * thx * zex / (th * th) +
                 ze / th * mu1 * psx * psx;
    }
    EnergyBudget b;
    b.energy = integrate(energy, grid);
    b.dissipation = integrate(diss, grid);
    b.remainder = integrate(rem, grid);
    b.boundary_flux = flux[n - 1] - flux[0];
    return b;
}

EnergyIdentityReport energy_identity_residual(const std::vector<FieldState>& snapshots,
                                              const PlanarProfile& profile, const FlattenedGrid& grid,
                                              const GasParams& g) {
    if (grid.d() != 1) throw DomainError("unsupported_geometry", "the energy identity audit is one-dimensional");
    if (snapshots.size() < 2) throw DomainError("cadence_too_coarse", "need at least two snapshots");
    std::vector<EnergyBudget> b;
    for (const auto& s : snapshots) b.push_back(energy_budget(s, profile, grid, g));
    EnergyIdentityReport rep;
    for (std::size_t k = 0; k + 1 < snapshots.size(); ++k) {
        const double dt = snapshots[k + 1].t - snapshots[k].t;
        if (!(dt > 0)) throw DomainError("cadence_too_coarse", "snapshot times must increase");
        EnergyIdentityInterval iv;
        iv.t0 = snapshots[k].t;
        iv.t1 = snapshots[k + 1].t;
        iv.rate = (b[k + 1].energy - b[k].energy) / dt;
        iv.dissipation = 0.5 * (b[k].dissipation + b[k + 1].dissipation);
        iv.boundary_flux = 0.5 * (b[k].boundary_flux + b[k + 1].boundary_flux);
        iv.remainder = 0.5 * (b[k].remainder + b[k + 1].remainder);
        iv.residual = iv.rate + iv.dissipation - iv.boundary_flux - iv.remainder;
        rep.dissipation_nonnegative = rep.dissipation_nonnegative && iv.dissipation >= 0;
        rep.max_residual = std::max(rep.max_residual, std::abs(iv.residual));
        for (double v : {iv.rate, iv.dissipation, iv.boundary_flux, iv.remainder})
            rep.scale = std::max(rep.scale, std::abs(v));
        rep.intervals.push_back(iv);
    }
    return rep;
}

HardyResult hardy_check(const Field& f, const FlattenedGrid& grid, double alpha) {
    if (!(alpha > 0)) throw ConfigError("invalid_alpha", "Hardy check needs alpha > 0");
    const Field w = node_weights(grid, 0.0);
    const Stencil st{grid};
    HardyResult r;
    double grad = 0;
    for (std::size_t j = 0; j < grid.n2(); ++j) {
        const double dm = grid.d() == 2 ? grid.dM()[j] : 0.0;
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            const std::size_t k = grid.idx(i, j);
            r.lhs += w[k] * std::exp(-alpha * grid.y1(i)) * f[k] * f[k];
            const HatFirst hg = hat_first(st, f, i, j, dm);
            grad += w[k] * (hg.g1 * hg.g1 + hg.g2 * hg.g2);
        }
    }
    r.rhs = grad + trace_norm_sq(f, grid);
    if (r.rhs > 0)
        r.ratio = r.lhs / r.rhs;
    else
        r.ratio = r.lhs > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    r.flagged = r.ratio > hardy_flag_ratio;
    return r;
}

EnergyReport energy_report(const FieldState& s, const BackgroundState& bg, const PlanarProfile& profile,
                           const FlowProblem& p, double beta) {
    EnergyReport r;
    r.t = s.t;
    const Perturbation pert = extract_perturbation(s, bg);
    r.weighted_norm = weighted_norm(pert, p.grid, beta);
    const EnergyNorms en = energy_norms(pert, p.grid, beta);
    r.e0 = en.e0;
    r.e1 = en.e1;
    r.energy = energy_form(s, background_reference(bg), p.grid, p.gas).integral;
    const FieldState b = background_state(bg);
    r.contraction = contraction_functional(pert, contraction_weights(s, b, bg.theta_profile), p.grid, beta, p.gas);
    if (p.grid.d() == 1) {
        r.budget = energy_budget(s, profile, p.grid, p.gas);
    } else {
        r.budget.energy = r.energy;
    }
    return r;
}

void write_report_csv_header(std::ostream& os) {
    os << "t,weighted_norm,e0,e1,energy,contraction,dissipation,boundary_flux,remainder\n";
}

void write_report_csv_row(std::ostream& os, const EnergyReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.weighted_norm,
                  r.e0, r.e1, r.energy, r.contraction, r.budget.dissipation, r.budget.boundary_flux,
                  r.budget.remainder);
    os << buf;
}

}  // namespace outflow
