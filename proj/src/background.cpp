#include "outflow/background.hpp"

#include <cmath>

#include "outflow/numerics.hpp"

namespace outflow {

BackgroundState assemble_background(const PlanarProfile& profile, const Extension& ext, const FlattenedGrid& grid) {
    if (profile.size() != grid.n1() || std::abs(profile.length() - grid.length()) > 1e-12 * grid.length())
        throw DomainError("grid_mismatch", "profile samples do not coincide with the y1 grid");
    if (ext.field.Theta.size() != grid.size() || static_cast<int>(ext.field.U.size()) != grid.d())
        throw DomainError("grid_mismatch", "extension does not match the grid");
    BackgroundState bg;
    bg.rho = grid.zeros();
    bg.u.assign(grid.d(), grid.zeros());
    bg.theta = grid.zeros();
    bg.theta_profile = grid.zeros();
    for (std::size_t j = 0; j < grid.n2(); ++j)
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            const std::size_t k = grid.idx(i, j);
            bg.rho[k] = profile.rho[i];
            bg.theta_profile[k] = profile.theta[i];
            for (int c = 0; c < grid.d(); ++c) bg.u[c][k] = (c == 0 ? profile.u1[i] : 0.0) + ext.field.U[c][k];
            bg.theta[k] = profile.theta[i] + ext.field.Theta[k];
            if (i == 0) {
                for (int c = 0; c < grid.d(); ++c) bg.u[c][k] = ext.data.u_b[c][j];
                bg.theta[k] = ext.data.theta_b[j];
            }
        }
    return bg;
}

Perturbation extract_perturbation(const FieldState& s, const BackgroundState& bg) {
    Perturbation p;
    const std::size_t n = s.size();
    p.phi.resize(n);
    p.zeta.resize(n);
    p.psi.assign(s.u.size(), Field(n));
    for (std::size_t k = 0; k < n; ++k) {
        p.phi[k] = s.rho[k] - bg.rho[k];
        p.zeta[k] = s.theta[k] - bg.theta[k];
        for (std::size_t c = 0; c < s.u.size(); ++c) p.psi[c][k] = s.u[c][k] - bg.u[c][k];
    }
    return p;
}

FieldState embed(const BackgroundState& bg, const Perturbation& pert, double t) {
    FieldState s;
    s.t = t;
    const std::size_t n = bg.rho.size();
    s.rho.resize(n);
    s.theta.resize(n);
    s.u.assign(bg.u.size(), Field(n));
    for (std::size_t k = 0; k < n; ++k) {
        s.rho[k] = bg.rho[k] + pert.phi[k];
        s.theta[k] = bg.theta[k] + pert.zeta[k];
        for (std::size_t c = 0; c < bg.u.size(); ++c) s.u[c][k] = bg.u[c][k] + pert.psi[c][k];
    }
    return s;
}

FieldState background_state(const BackgroundState& bg) {
    FieldState s;
    s.rho = bg.rho;
    s.u = bg.u;
    s.theta = bg.theta;
    return s;
}

double boundary_defect(const Perturbation& pert, const FlattenedGrid& grid) {
    double m = 0;
    for (std::size_t j = 0; j < grid.n2(); ++j) {
        const std::size_t k = grid.idx(0, j);
        for (const auto& ps : pert.psi) m = std::max(m, std::abs(ps[k]));
        m = std::max(m, std::abs(pert.zeta[k]));
    }
    return m;
}

Forcing forcing_terms(const PlanarProfile& profile, const Extension& ext, const FlattenedGrid& grid,
                      const GasParams& g) {
    if (profile.size() != grid.n1()) throw DomainError("grid_mismatch", "profile samples do not match the grid");
    const ProfileDerivatives pd = profile_derivatives(profile);
    const ExtensionDerivatives ed = extension_derivatives(ext, grid);
    const bool two = grid.d() == 2;
    const double mu = g.mu, ml = g.mu + g.lambda, lam = g.lambda, kap = g.kappa, R = g.R, cv = g.cv();

    Forcing out;
    out.F = grid.zeros();
    out.G.assign(grid.d(), grid.zeros());
    out.H = grid.zeros();

    for (std::size_t j = 0; j < grid.n2(); ++j) {
        const double p = two ? grid.dM()[j] : 0.0, q = two ? grid.d2M()[j] : 0.0;
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            const std::size_t k = grid.idx(i, j);
            const double rt = profile.rho[i], ut = profile.u1[i], tt = profile.theta[i];
            const double r1 = pd.rho_x[i], u1 = pd.u_x[i], u11 = pd.u_xx[i], t1 = pd.theta_x[i], t11 = pd.theta_xx[i];

            // hat derivatives of the extension components
            struct Hat {
                double v, g1, g2, h11, h12, h22;
            };
            auto hat = [&](const ComponentDerivatives& c) {
                Hat h;
                h.v = c.v[k];
                h.g1 = c.d1[k];
                h.g2 = c.d2[k] - p * c.d1[k];
                h.h11 = c.d11[k];
                h.h12 = c.d12[k] - p * c.d11[k];
                h.h22 = c.d22[k] - 2.0 * p * c.d12[k] + p * p * c.d11[k] - q * c.d1[k];
                return h;
            };
            const Hat U1 = hat(ed.U[0]);
            const Hat U2 = two ? hat(ed.U[1]) : Hat{0, 0, 0, 0, 0, 0};
            const Hat Th = hat(ed.Theta);

            const double divU = U1.g1 + U2.g2;
            const double ub1 = ut + U1.v, ub2 = U2.v;  // full background velocity
            const double Un = U1.v - p * U2.v;         // U . (1, -p)

            // F = -grad rho~ . U - rho~ div U
            out.F[k] = -r1 * Un - rt * divU;

            // G
            const double convU1 = ub1 * U1.g1 + ub2 * U1.g2;
            const double convU2 = ub1 * U2.g1 + ub2 * U2.g2;
            const double LU1 = mu * (U1.h11 + U1.h22) + ml * (U1.h11 + U2.h12);
            const double LU2 = mu * (U2.h11 + U2.h22) + ml * (U1.h12 + U2.h22);
            double G1 = -rt * convU1 - rt * Un * u1 + LU1 - R * rt * Th.g1 - R * Th.v * r1;
            G1 += mu * u11 * p * p - mu * u1 * q;
            out.G[0][k] = G1;
            if (two) {
                double G2 = -rt * convU2 + LU2 - R * rt * Th.g2 - R * Th.v * (-p * r1);
                G2 += (R * tt * r1 + R * rt * t1 - ml * u11) * p;
                out.G[1][k] = G2;
            }

            // H
            const double divt = u1;
            const double DU11 = U1.g1, DU22 = U2.g2, DU12 = 0.5 * (U1.g2 + U2.g1);
            const double DU2 = DU11 * DU11 + DU22 * DU22 + 2.0 * DU12 * DU12;
            const double DtDU = u1 * DU11 - p * u1 * DU12;
            double H = -cv * rt * Un * t1 - cv * rt * (ub1 * Th.g1 + ub2 * Th.g2) - R * rt * Th.v * divt -
                       R * rt * (tt + Th.v) * divU;
            H += kap * t11 * p * p - kap * t1 * q + kap * (Th.h11 + Th.h22);
            H += 2.0 * mu * DU2 + 4.0 * mu * DtDU + lam * divU * divU + 2.0 * lam * divt * divU;
            H += mu * u1 * u1 * p * p;
            out.H[k] = H;
        }
    }
    return out;
}

double forcing_norm(const Forcing& f, const FlattenedGrid& grid, double beta) {
    const auto w1 = trapezoid_weights(grid.n1(), grid.h1());
    const double w2 = grid.d() == 2 ? grid.h2() : 1.0;
    double s = 0;
    for (std::size_t j = 0; j < grid.n2(); ++j)
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            const std::size_t k = grid.idx(i, j);
            double v = f.F[k] * f.F[k] + f.H[k] * f.H[k];
            for (const auto& G : f.G) v += G[k] * G[k];
            s += w1[i] * w2 * std::exp(beta * grid.y1(i)) * v;
        }
    return std::sqrt(s);
}

}  // namespace outflow
