#include <doctest.h>

#include <cmath>
#include <sstream>

#include "outflow/errors.hpp"
#include "outflow/planar_profile.hpp"

using namespace outflow;

namespace {

const GasParams gas{};
const FarFieldState canon{1, -2, 1};

// Classical fixed-step RK4 on the reduced system, independent of the library integrator.
std::array<double, 2> rk4_profile(double u0, double t0, double x, const FarFieldState& ff, int steps) {
    double u = u0, t = t0;
    const double h = x / steps;
    for (int k = 0; k < steps; ++k) {
        const auto a = reduced_rhs(u, t, ff, gas);
        const auto b = reduced_rhs(u + 0.5 * h * a[0], t + 0.5 * h * a[1], ff, gas);
        const auto c = reduced_rhs(u + 0.5 * h * b[0], t + 0.5 * h * b[1], ff, gas);
        const auto d = reduced_rhs(u + h * c[0], t + h * c[1], ff, gas);
        u += h / 6 * (a[0] + 2 * b[0] + 2 * c[0] + d[0]);
        t += h / 6 * (a[1] + 2 * b[1] + 2 * c[1] + d[1]);
    }
    return {u, t};
}

}  // namespace

TEST_CASE("reduced system vanishes at the end state and is singular at zero velocity") {
    const auto r = reduced_rhs(canon.u, canon.theta, canon, gas);
    CHECK(r[0] == 0.0);
    CHECK(r[1] == 0.0);
    CHECK_THROWS_AS(reduced_rhs(0.0, 1.0, canon, gas), DomainError);
}

TEST_CASE("reduced system follows its Jacobian near the end state") {
    const Eigen::Matrix2d J = reduced_jacobian(canon.u, canon.theta, canon, gas);
    const auto r = reduced_rhs(canon.u + 1e-6, canon.theta, canon, gas);
    CHECK(std::abs(r[0] - J(0, 0) * 1e-6) < 1e-9);
    CHECK(std::abs(r[1] - J(1, 0) * 1e-6) < 1e-9);
}

TEST_CASE("analytic Jacobian matches central differences away from the end state") {
    const double u = -1.9, t = 1.05, e = 1e-6;
    const Eigen::Matrix2d J = reduced_jacobian(u, t, canon, gas);
    const auto up = reduced_rhs(u + e, t, canon, gas), um = reduced_rhs(u - e, t, canon, gas);
    const auto tp = reduced_rhs(u, t + e, canon, gas), tm = reduced_rhs(u, t - e, canon, gas);
    CHECK(J(0, 0) == doctest::Approx((up[0] - um[0]) / (2 * e)).epsilon(1e-7));
    CHECK(J(1, 0) == doctest::Approx((up[1] - um[1]) / (2 * e)).epsilon(1e-7));
    CHECK(J(0, 1) == doctest::Approx((tp[0] - tm[0]) / (2 * e)).epsilon(1e-7));
    CHECK(J(1, 1) == doctest::Approx((tp[1] - tm[1]) / (2 * e)).epsilon(1e-7));
}

TEST_CASE("end state is a stable node for supersonic and not for sonic far fields") {
    const auto lin = endstate_jacobian(canon, gas);
    CHECK(lin.stable);
    for (const auto& e : lin.eigenvalues) CHECK(e.real() < 0);
    // eigenvalues of a finite-difference Jacobian
    const double e = 1e-6;
    Eigen::Matrix2d Jf;
    const auto up = reduced_rhs(canon.u + e, canon.theta, canon, gas), um = reduced_rhs(canon.u - e, canon.theta, canon, gas);
    const auto tp = reduced_rhs(canon.u, canon.theta + e, canon, gas), tm = reduced_rhs(canon.u, canon.theta - e, canon, gas);
    Jf << (up[0] - um[0]) / (2 * e), (tp[0] - tm[0]) / (2 * e), (up[1] - um[1]) / (2 * e), (tp[1] - tm[1]) / (2 * e);
    Eigen::EigenSolver<Eigen::Matrix2d> es(Jf);
    std::vector<double> a{es.eigenvalues()[0].real(), es.eigenvalues()[1].real()};
    std::vector<double> b{lin.eigenvalues[0].real(), lin.eigenvalues[1].real()};
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(std::abs(a[0] - b[0]) < 1e-6);
    CHECK(std::abs(a[1] - b[1]) < 1e-6);

    const FarFieldState sonic{1, -std::sqrt(gas.gamma * gas.R), 1};
    const auto ls = endstate_jacobian(sonic, gas);
    CHECK_FALSE(ls.stable);
    CHECK(std::max(ls.eigenvalues[0].real(), ls.eigenvalues[1].real()) >= -1e-12);
}

TEST_CASE("zero boundary strength gives the constant profile without a fit") {
    const PlanarProfile p = solve_profile({canon.u, canon.theta}, canon, gas, 40, 201, 1e-8);
    CHECK(p.delta_tilde == 0.0);
    CHECK_FALSE(p.alpha_fit.has_value());
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(p.rho[i] == canon.rho);
        CHECK(p.u1[i] == canon.u);
        CHECK(p.theta[i] == canon.theta);
    }
    CHECK_THROWS_AS(profile_tail_bound(p, 0), DomainError);
}

TEST_CASE("canonical profile: invariants, fitted rate and independent integration") {
    const PlanarProfile p = solve_profile({canon.u + 0.01, canon.theta}, canon, gas, 40, 401, 1e-8);
    REQUIRE(p.alpha_fit.has_value());
    const double slow = endstate_jacobian(canon, gas).slowest_rate;
    CHECK(std::abs(*p.alpha_fit - slow) / slow < 0.05);
    CHECK(p.fit_r2 >= 0.999);
    CHECK(p.u1[0] == canon.u + 0.01);
    CHECK(p.theta[0] == canon.theta);
    double mass = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(p.rho[i] > 0);
        CHECK(p.theta[i] > 0);
        CHECK(p.u1[i] < 0);
        mass = std::max(mass, std::abs(p.rho[i] * p.u1[i] - canon.rho * canon.u));
    }
    CHECK(mass <= 1e-10);
    for (double x : {1.0, 5.0, 20.0}) {
        const auto ref = rk4_profile(canon.u + 0.01, canon.theta, x, canon, 20000);
        const std::size_t i = static_cast<std::size_t>(std::lround(x / p.spacing()));
        CHECK(std::abs(p.u1[i] - ref[0]) < 1e-10);
        CHECK(std::abs(p.theta[i] - ref[1]) < 1e-10);
    }
}

TEST_CASE("profile errors") {
    CHECK_THROWS_WITH_AS(solve_profile({-0.99, 1}, {1, -1, 1}, gas, 40, 201, 1e-8), doctest::Contains("supersonic"),
                         DomainError);
    try {
        solve_profile({-0.99, 1}, {1, -1, 1}, gas, 40, 201, 1e-8);
    } catch (const DomainError& e) {
        CHECK(e.kind() == "subsonic_far_field");
    }
    try {
        solve_profile({canon.u + 0.01, 1}, canon, gas, 2, 21, 1e-12);
        FAIL("expected domain_too_short");
    } catch (const DomainError& e) {
        CHECK(e.kind() == "domain_too_short");
    }
    try {
        solve_profile({canon.u + 0.5, 1}, canon, gas, 40, 201, 1e-8);
        FAIL("expected boundary_strength_too_large");
    } catch (const DomainError& e) {
        CHECK(e.kind() == "boundary_strength_too_large");
    }
}

TEST_CASE("tail bound holds sample-wise and k=0,1 rates agree") {
    const PlanarProfile p = solve_profile({canon.u + 0.01, canon.theta}, canon, gas, 40, 401, 1e-8);
    const TailBound t0 = profile_tail_bound(p, 0), t1 = profile_tail_bound(p, 1);
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        if (p.x[i] <= 1.0) continue;
        const double dev = std::hypot(p.drho[i], p.du1[i], p.dtheta[i]);
        CHECK(dev <= t0.C * p.delta_tilde * std::exp(-t0.alpha * p.x[i]) * (1 + 1e-12));
    }
    CHECK(std::abs(t1.alpha - t0.alpha) / t0.alpha < 0.1);
}

TEST_CASE("profile deviation is linear in the boundary strength") {
    const PlanarProfile a = solve_profile({canon.u + 5e-4, canon.theta + 2.5e-4}, canon, gas, 40, 201, 1e-8);
    const PlanarProfile b = solve_profile({canon.u + 1e-3, canon.theta + 5e-4}, canon, gas, 40, 201, 1e-8);
    for (std::size_t i = 0; i < a.size(); i += 10) {
        if (std::abs(a.du1[i]) < 1e-12) continue;
        CHECK(b.du1[i] / a.du1[i] == doctest::Approx(2.0).epsilon(0.05));
    }
}

TEST_CASE("profile derivatives agree with finite differences and CSV has the declared header") {
    const PlanarProfile p = solve_profile({canon.u + 0.01, canon.theta}, canon, gas, 40, 2001, 1e-8);
    const ProfileDerivatives d = profile_derivatives(p);
    const double h = p.spacing();
    for (std::size_t i = 1; i + 1 < p.size(); i += 97) {
        CHECK(std::abs(d.u_x[i] - (p.u1[i + 1] - p.u1[i - 1]) / (2 * h)) < 1e-5);
        CHECK(std::abs(d.theta_x[i] - (p.theta[i + 1] - p.theta[i - 1]) / (2 * h)) < 1e-5);
        CHECK(std::abs(d.rho_x[i] - (p.rho[i + 1] - p.rho[i - 1]) / (2 * h)) < 1e-5);
    }
    std::ostringstream os;
    write_profile_csv(os, p);
    CHECK(os.str().rfind("x1,rho,u1,theta\n", 0) == 0);
}
