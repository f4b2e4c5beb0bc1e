#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "outflow/errors.hpp"
#include "outflow/gas_model.hpp"

using namespace outflow;

TEST_CASE("pressure follows the ideal gas law") {
    GasParams g;
    CHECK(pressure(1, 1, g) == 1.0);
    CHECK(pressure(2, 3, g) == 6.0);
    CHECK_THROWS_AS(pressure(0, 1, g), DomainError);
    CHECK_THROWS_AS(pressure(1, -1, g), DomainError);
}

TEST_CASE("derived gas constants") {
    GasParams g;
    CHECK(g.cv() == doctest::Approx(1.5));
    CHECK(g.mu1() == 2.0);
    GasParams bad;
    bad.gamma = 1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = GasParams{};
    bad.lambda = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    FarFieldState ff{1, 1, 1};
    CHECK_THROWS_AS(ff.validate(), ConfigError);
}

TEST_CASE("mach number and supersonic classification") {
    GasParams g;
    const FarFieldState canon{1, -2, 1};
    CHECK(mach_number(canon, g) == doctest::Approx(2.0 / std::sqrt(5.0 / 3.0)).epsilon(1e-15));
    CHECK(mach_number(canon, g) == doctest::Approx(1.549193338482967).epsilon(1e-14));
    CHECK(check_supersonic(canon, g) == FlowRegime::supersonic);

    const FarFieldState sonic{1, -std::sqrt(g.gamma * g.R), 1};
    CHECK(mach_number(sonic, g) == 1.0);
    CHECK(check_supersonic(sonic, g) == FlowRegime::sonic_or_subsonic);

    const FarFieldState sub{1, -1, 1};
    CHECK(mach_number(sub, g) == doctest::Approx(0.7745966692414834).epsilon(1e-14));
    CHECK(check_supersonic(sub, g) == FlowRegime::sonic_or_subsonic);
}

TEST_CASE("mach number is invariant under velocity-temperature scaling") {
    GasParams g;
    for (double s : {0.3, 1.7, 4.0}) {
        const FarFieldState a{2, -1.3, 0.7}, b{2, -1.3 * s, 0.7 * s * s};
        CHECK(mach_number(b, g) == doctest::Approx(mach_number(a, g)).epsilon(1e-14));
    }
}

TEST_CASE("boundary quadratic form matrix entries and determinant") {
    GasParams g;
    const FarFieldState canon{1, -2, 1};
    const Eigen::Matrix3d m = f1_matrix(canon, g);
    CHECK(m(0, 0) == doctest::Approx(1.0));
    CHECK(m(1, 1) == doctest::Approx(1.0));
    CHECK(m(2, 2) == doctest::Approx(1.5));
    CHECK(m(0, 1) == -0.5);
    CHECK(m(1, 2) == -0.5);
    CHECK(m(0, 2) == 0.0);
    CHECK(m.isApprox(m.transpose()));
    CHECK(f1_determinant(canon, g) == doctest::Approx(0.875).epsilon(1e-14));
    CHECK(m.determinant() == doctest::Approx(0.875).epsilon(1e-13));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m);
    CHECK(es.eigenvalues().minCoeff() > 0);
    CHECK(is_positive_definite(m));

    const FarFieldState sub{1, -1, 1};
    const Eigen::Matrix3d ms = f1_matrix(sub, g);
    CHECK(f1_determinant(sub, g) < 0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> ess(ms);
    CHECK(ess.eigenvalues().minCoeff() < 0);
    CHECK_FALSE(is_positive_definite(ms));

    const FarFieldState sonic{1, -std::sqrt(g.gamma * g.R), 1};
    CHECK(std::abs(f1_determinant(sonic, g)) < 1e-15);
}

TEST_CASE("positive definiteness holds exactly for supersonic far fields") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.2, 3.0), G(1.05, 2.0), M(0.3, 3.0);
    for (int n = 0; n < 500; ++n) {
        GasParams g;
        g.gamma = G(rng);
        g.R = U(rng);
        const double theta = U(rng), mach = M(rng);
        if (std::abs(mach - 1.0) < 1e-3) continue;
        const FarFieldState ff{U(rng), -mach * std::sqrt(g.gamma * g.R * theta), theta};
        const Eigen::Matrix3d m = f1_matrix(ff, g);
        CHECK(is_positive_definite(m) == (mach_number(ff, g) > 1.0));
        CHECK(m.determinant() == doctest::Approx(f1_determinant(ff, g)).epsilon(1e-10).scale(1.0));
        CHECK(pressure(ff.rho, ff.theta, g) > 0);
    }
}
