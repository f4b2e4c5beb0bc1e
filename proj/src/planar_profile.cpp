#include "outflow/planar_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "outflow/errors.hpp"
#include "outflow/numerics.hpp"

namespace outflow {

namespace {

// Reduced system written in the deviations v = u1 - u+, w = theta - theta+.
std::array<double, 2> rhs_dev(double v, double w, const FarFieldState& ff, const GasParams& g) {
    const double up = ff.u, tp = ff.theta;
    const double u = up + v;
    if (u == 0.0) throw DomainError("singularity", "reduced system is singular at u1 = 0");
    const double m = ff.rho * up;
    const double du = m * (v + g.R * (w * up - tp * v) / (u * up)) / g.mu1();
    const double dt = (m * (g.cv() * w + 0.5 * v * (2.0 * up + v)) + m * g.R * w - g.mu1() * u * du) / g.kappa;
    return {du, dt};
}

}  // namespace

double PlanarBoundaryData::strength(const FarFieldState& ff) const {
    return std::abs(u_b - ff.u) + std::abs(theta_b - ff.theta);
}

std::array<double, 2> reduced_rhs(double u1, double theta, const FarFieldState& ff, const GasParams& g) {
    if (u1 == 0.0) throw DomainError("singularity", "reduced system is singular at u1 = 0");
    return rhs_dev(u1 - ff.u, theta - ff.theta, ff, g);
}

Eigen::Matrix2d reduced_jacobian(double u1, double theta, const FarFieldState& ff, const GasParams& g) {
    if (u1 == 0.0) throw DomainError("singularity", "reduced system is singular at u1 = 0");
    const double m = ff.rho * ff.u;
    const auto f = reduced_rhs(u1, theta, ff, g);
    const double a = m * (1.0 - g.R * theta / (u1 * u1)) / g.mu1();
    const double b = m * g.R / (u1 * g.mu1());
    Eigen::Matrix2d J;
    J(0, 0) = a;
    J(0, 1) = b;
    J(1, 0) = (m * u1 - g.mu1() * (f[0] + u1 * a)) / g.kappa;
    J(1, 1) = (m * (g.cv() + g.R) - g.mu1() * u1 * b) / g.kappa;
    return J;
}

EndstateLinearization endstate_jacobian(const FarFieldState& ff, const GasParams& g) {
    EndstateLinearization lin;
    lin.jacobian = reduced_jacobian(ff.u, ff.theta, ff, g);
    const double tr = lin.jacobian.trace();
    const double det = lin.jacobian.determinant();
    const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr - 4.0 * det, 0.0));
    lin.eigenvalues[0] = 0.5 * (tr - disc);
    lin.eigenvalues[1] = 0.5 * (tr + disc);
    lin.stable = lin.eigenvalues[0].real() < 0 && lin.eigenvalues[1].real() < 0;
    lin.slowest_rate = std::min(std::abs(lin.eigenvalues[0].real()), std::abs(lin.eigenvalues[1].real()));
    return lin;
}

PlanarProfile solve_profile(const PlanarBoundaryData& bd, const FarFieldState& ff, const GasParams& g,
                            double length, std::size_t n, double tol, const ProfileOptions& opt) {
    g.validate();
    ff.validate();
    if (check_supersonic(ff, g) != FlowRegime::supersonic)
        throw DomainError("subsonic_far_field", "far field is not supersonic (Mach " +
                                                    std::to_string(mach_number(ff, g)) + ")");
    if (!(length > 0) || n < 2) throw ConfigError("invalid_grid", "profile needs length > 0 and at least 2 samples");
    if (!(tol > 0)) throw ConfigError("invalid_tolerance", "profile tolerance must be positive");
    if (!(bd.theta_b > 0) || !(bd.u_b < 0))
        throw ConfigError("invalid_boundary_data", "planar boundary data needs u_b < 0 and theta_b > 0");
    const double delta = bd.strength(ff);
    if (delta > opt.delta_max)
        throw DomainError("boundary_strength_too_large",
                          "boundary strength " + std::to_string(delta) + " exceeds delta_max");

    PlanarProfile p;
    p.ff = ff;
    p.gas = g;
    p.delta_tilde = delta;
    p.x.resize(n);
    const double h = length / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) p.x[i] = h * static_cast<double>(i);
    p.x.back() = length;
    p.du1.assign(n, 0.0);
    p.dtheta.assign(n, 0.0);

    if (delta > 0) {
        using State = std::array<double, 2>;
        namespace ode = boost::numeric::odeint;
        auto system = [&](const State& s, State& ds, double) {
            const double u = ff.u + s[0], th = ff.theta + s[1];
            if (!(u < 0) || !(th > 0) || !std::isfinite(u) || !std::isfinite(th))
                throw DomainError("divergence", "profile trajectory left the admissible region");
            ds = rhs_dev(s[0], s[1], ff, g);
        };
        State s{bd.u_b - ff.u, bd.theta_b - ff.theta};
        std::size_t k = 0;
        auto observer = [&](const State& st, double) {
            p.du1[k] = st[0];
            p.dtheta[k] = st[1];
            ++k;
        };
        auto stepper = ode::make_dense_output(opt.atol * 1e-12 * delta, opt.rtol, ode::runge_kutta_dopri5<State>());
        ode::integrate_times(stepper, system, s, p.x.begin(), p.x.end(), std::min(h, 1e-3), observer);
    }

    const double m = ff.rho * ff.u;
    p.rho.resize(n);
    p.u1.resize(n);
    p.theta.resize(n);
    p.drho.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.u1[i] = ff.u + p.du1[i];
        p.theta[i] = ff.theta + p.dtheta[i];
        p.rho[i] = m / p.u1[i];
        p.drho[i] = -ff.rho * p.du1[i] / p.u1[i];
        if (i == 0) {
            p.u1[0] = bd.u_b;
            p.theta[0] = bd.theta_b;
            p.rho[0] = m / p.u1[0];
        }
        if (!(p.u1[i] < 0) || !(p.theta[i] > 0) || !(p.rho[i] > 0))
            throw DomainError("divergence", "profile sample outside the admissible region");
    }

    const double tail = std::abs(p.du1.back()) + std::abs(p.dtheta.back());
    if (tail > tol)
        throw DomainError("domain_too_short", "profile tail deviation " + std::to_string(tail) +
                                                  " exceeds tolerance at x1 = " + std::to_string(length));

    if (delta > 0) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < n; ++i) {
            if (p.x[i] < 0.5 * length || p.x[i] > 0.9 * length) continue;
            const double dev = std::abs(p.du1[i]) + std::abs(p.dtheta[i]);
            if (dev > 0) {
                xs.push_back(p.x[i]);
                ys.push_back(std::log(dev));
            }
        }
        if (xs.size() >= 3) {
            const LinearFit f = linear_fit(xs, ys);
            if (f.slope < 0) {
                p.alpha_fit = -f.slope;
                p.fit_r2 = f.r2;
            }
        }
    }
    return p;
}

TailBound profile_tail_bound(const PlanarProfile& p, int k) {
    if (k < 0 || k > 2) throw ConfigError("invalid_argument", "derivative order must be 0, 1 or 2");
    if (!(p.delta_tilde > 0)) throw DomainError("fit_failure", "constant profile has no tail to fit");
    const std::size_t n = p.size();
    if (n < 5) throw DomainError("fit_failure", "too few samples");
    const double h = p.spacing();
    const std::array<const std::vector<double>*, 3> comps{&p.drho, &p.du1, &p.dtheta};

    std::vector<double> xs, dev;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (p.x[i] <= 1.0) continue;
        double s = 0;
        for (const auto* c : comps) {
            const auto& f = *c;
            double d = f[i];
            if (k == 1) d = (f[i + 1] - f[i - 1]) / (2.0 * h);
            if (k == 2) d = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
            s += d * d;
        }
        xs.push_back(p.x[i]);
        dev.push_back(std::sqrt(s));
    }
    if (xs.size() < 3) throw DomainError("fit_failure", "no samples beyond x1 = 1");

    // noise floor of the differenced deviations
    double vmax = 0;
    for (const auto* c : comps)
        for (double v : *c) vmax = std::max(vmax, std::abs(v));
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * vmax / std::pow(h, k);

    const double L = p.length();
    std::vector<double> fx, fy;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] < 0.5 * L || xs[i] > 0.9 * L) continue;
        if (dev[i] > prev + floor) throw DomainError("fit_failure", "profile tail is not monotone");
        prev = dev[i];
        if (dev[i] > floor) {
            fx.push_back(xs[i]);
            fy.push_back(std::log(dev[i]));
        }
    }
    if (fx.size() < 3) throw DomainError("fit_failure", "tail is below the noise floor");
    const LinearFit f = linear_fit(fx, fy);
    if (!(f.slope < 0)) throw DomainError("fit_failure", "tail does not decay");

    TailBound tb;
    tb.alpha = -f.slope;
    for (std::size_t i = 0; i < xs.size(); ++i)
        tb.C = std::max(tb.C, dev[i] * std::exp(tb.alpha * xs[i]) / p.delta_tilde);
    return tb;
}

ProfileDerivatives profile_derivatives(const PlanarProfile& p) {
    const std::size_t n = p.size();
    ProfileDerivatives d;
    d.rho_x.resize(n);
    d.rho_xx.resize(n);
    d.u_x.resize(n);
    d.u_xx.resize(n);
    d.theta_x.resize(n);
    d.theta_xx.resize(n);
    const double m = p.ff.rho * p.ff.u;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = p.u1[i];
        const auto f = rhs_dev(p.du1[i], p.dtheta[i], p.ff, p.gas);
        const Eigen::Matrix2d J = reduced_jacobian(u, p.theta[i], p.ff, p.gas);
        const double uxx = J(0, 0) * f[0] + J(0, 1) * f[1];
        const double txx = J(1, 0) * f[0] + J(1, 1) * f[1];
        d.u_x[i] = f[0];
        d.theta_x[i] = f[1];
        d.u_xx[i] = uxx;
        d.theta_xx[i] = txx;
        d.rho_x[i] = -m * f[0] / (u * u);
        d.rho_xx[i] = -m * (uxx / (u * u) - 2.0 * f[0] * f[0] / (u * u * u));
    }
    return d;
}

void write_profile_csv(std::ostream& os, const PlanarProfile& p) {
    os << "x1,rho,u1,theta\n";
    os.precision(17);
    for (std::size_t i = 0; i < p.size(); ++i)
        os << p.x[i] << ',' << p.rho[i] << ',' << p.u1[i] << ',' << p.theta[i] << '\n';
}

}  // namespace outflow
