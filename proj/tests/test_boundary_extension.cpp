#include <doctest.h>

#include <cmath>
#include <numbers>

#include "outflow/boundary_extension.hpp"
#include "outflow/errors.hpp"

using namespace outflow;

namespace {

const FarFieldState far{3, -2, 1};
const PlanarBoundaryData ref{-1.99, 1.0};

BoundaryShape sine_shape() { return {2, 1.0, {{1, 0.0, 0.1}}}; }

BoundaryData wavy_data(const FlattenedGrid& g, double eps) {
    return series_boundary_data(g, ref, {{{1, eps, 0.0}}, {{2, 0.0, eps}}}, {{1, 0.0, 0.5 * eps}});
}

}  // namespace

TEST_CASE("cutoff values") {
    CHECK(cutoff(-1.0) == 1.0);
    CHECK(cutoff(0.0) == 1.0);
    CHECK(cutoff(2.0) == 0.0);
    CHECK(cutoff(1.0) == 0.0);
    // quintic smoothstep at t = 1/2: 6/32 - 15/16 + 10/8 = 1/2
    CHECK(cutoff(0.5) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("cutoff is monotone and C2 with matching derivatives") {
    double prev = 1.0;
    for (int k = 0; k <= 1000; ++k) {
        const double s = k / 1000.0;
        CHECK(cutoff(s) <= prev);
        prev = cutoff(s);
        CHECK(cutoff(s) + cutoff(1.0 - s) == doctest::Approx(1.0).epsilon(1e-14));
    }
    const double h = 1e-5;
    for (double s : {0.1, 0.35, 0.5, 0.8}) {
        CHECK(cutoff_d1(s) == doctest::Approx((cutoff(s + h) - cutoff(s - h)) / (2 * h)).epsilon(1e-7));
        CHECK(cutoff_d2(s) == doctest::Approx((cutoff_d1(s + h) - cutoff_d1(s - h)) / (2 * h)).epsilon(1e-7));
    }
    for (double s : {0.0, 1.0}) {
        CHECK(cutoff_d1(s) == 0.0);
        CHECK(cutoff_d2(s) == 0.0);
    }
}

TEST_CASE("reference boundary data gives a zero extension") {
    const FlattenedGrid g(sine_shape(), 41, 4.0, 16);
    const Extension e = build_extension(planar_boundary_data(g, ref), g);
    for (const auto& u : e.field.U)
        for (double v : u) CHECK(v == 0.0);
    for (double v : e.field.Theta) CHECK(v == 0.0);
}

TEST_CASE("extension trace equals the boundary deviation and support ends at the collar") {
    const FlattenedGrid g(sine_shape(), 81, 4.0, 16);
    const BoundaryData bd = wavy_data(g, 0.02);
    const Extension e = build_extension(bd, g);
    for (std::size_t j = 0; j < g.n2(); ++j) {
        CHECK(e.field.U[0][g.idx(0, j)] == bd.u_b[0][j] - ref.u_b);
        CHECK(e.field.U[1][g.idx(0, j)] == bd.u_b[1][j]);
        CHECK(e.field.Theta[g.idx(0, j)] == bd.theta_b[j] - ref.theta_b);
        for (std::size_t i = 0; i < g.n1(); ++i) {
            if (g.y1(i) < 1.0) continue;
            const auto k = g.idx(i, j);
            CHECK(e.field.U[0][k] == 0.0);
            CHECK(e.field.U[1][k] == 0.0);
            CHECK(e.field.Theta[k] == 0.0);
        }
    }
}

TEST_CASE("normal outflow data reproduces its trace") {
    const FlattenedGrid g(sine_shape(), 41, 4.0, 32);
    const BoundaryData bd = normal_outflow_boundary_data(g, ref);
    const Extension e = build_extension(bd, g);
    const double a = std::abs(ref.u_b);
    for (std::size_t j = 0; j < g.n2(); ++j) {
        const auto n = normal_vector(g.shape(), g.y2(j));
        CHECK(std::abs(bd.u_b[0][j] - a * n[0]) <= 1e-15);
        CHECK(std::abs(bd.u_b[1][j] - a * n[1]) <= 1e-15);
        CHECK(std::abs(e.field.U[0][g.idx(0, j)] - (a * n[0] - ref.u_b)) <= 1e-14);
        CHECK(std::abs(e.field.U[1][g.idx(0, j)] - a * n[1]) <= 1e-14);
    }
}

TEST_CASE("normal outflow tangential derivatives match finite differences") {
    const FlattenedGrid g(sine_shape(), 11, 2.0, 64);
    const BoundaryData bd = normal_outflow_boundary_data(g, ref);
    const double h = g.h2();
    for (std::size_t j = 1; j + 1 < g.n2(); ++j)
        for (int c = 0; c < 2; ++c) {
            const double fd = (bd.u_b[c][j + 1] - bd.u_b[c][j - 1]) / (2 * h);
            CHECK(bd.du_b[c][j] == doctest::Approx(fd).epsilon(1e-2).scale(1.0));
        }
}

TEST_CASE("inflow boundary data is rejected with its node") {
    const FlattenedGrid g(sine_shape(), 21, 2.0, 16);
    const PlanarBoundaryData inflow{0.5, 1.0};
    try {
        build_extension(planar_boundary_data(g, inflow), g);
        FAIL("expected an outflow violation");
    } catch (const DomainError& e) {
        CHECK(e.kind() == "outflow_violation");
        CHECK(std::string(e.what()).find("node") != std::string::npos);
    }
    const PlanarBoundaryData cold{-1.99, 0.0};
    CHECK_THROWS_AS(build_extension(planar_boundary_data(g, cold), g), DomainError);
}

TEST_CASE("extension is linear in the boundary deviation") {
    const FlattenedGrid g(sine_shape(), 41, 2.0, 16);
    const Extension a = build_extension(wavy_data(g, 0.01), g);
    const Extension b = build_extension(wavy_data(g, 0.03), g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(b.field.U[0][k] == doctest::Approx(3.0 * a.field.U[0][k]).epsilon(1e-12).scale(1e-16));
        CHECK(b.field.U[1][k] == doctest::Approx(3.0 * a.field.U[1][k]).epsilon(1e-12).scale(1e-16));
        CHECK(b.field.Theta[k] == doctest::Approx(3.0 * a.field.Theta[k]).epsilon(1e-12).scale(1e-16));
    }
}

TEST_CASE("extension norms scale linearly with the deviation") {
    const FlattenedGrid g(sine_shape(), 81, 4.0, 32);
    const PlanarBoundaryData flat_ref{far.u, far.theta};
    auto norms = [&](double eps) {
        const BoundaryData bd = series_boundary_data(g, flat_ref, {{{1, eps, 0.0}}, {{1, 0.0, eps}}}, {{2, eps, 0.0}});
        return extension_norms(build_extension(bd, g), g, far);
    };
    const ExtensionNorms a = norms(1e-3), b = norms(4e-3);
    CHECK(a.delta > 0);
    CHECK(b.l2 / a.l2 == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(b.h1 / a.h1 == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(b.h2 / a.h2 == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-10));
}

TEST_CASE("exact extension derivatives agree with the discrete stencils") {
    // first differences converge at second order; second differences drop to first order at the
    // collar edge, where the cutoff's third derivative jumps
    auto mismatch = [](std::size_t n1, std::size_t n2, bool second) {
        const FlattenedGrid g(sine_shape(), n1, 2.0, n2);
        const Extension e = build_extension(wavy_data(g, 0.01), g);
        const ExtensionDerivatives d = extension_derivatives(e, g);
        const Stencil st{g};
        double err = 0;
        for (std::size_t j = 0; j < g.n2(); ++j)
            for (std::size_t i = 1; i + 1 < g.n1(); ++i) {
                const auto k = g.idx(i, j);
                if (second) {
                    err = std::max(err, std::abs(d.U[1].d11[k] - st.d11(e.field.U[1], i, j)));
                } else {
                    err = std::max(err, std::abs(d.U[0].d1[k] - st.d1(e.field.U[0], i, j)));
                    err = std::max(err, std::abs(d.Theta.d2[k] - st.d2(e.field.Theta, i, j)));
                }
            }
        return err;
    };
    const double a = mismatch(101, 32, false), b = mismatch(201, 64, false);
    CHECK(a < 1e-3);
    CHECK(a / b == doctest::Approx(4.0).epsilon(0.2));
    CHECK(mismatch(101, 32, true) / mismatch(201, 64, true) > 1.8);
}
