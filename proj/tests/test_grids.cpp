#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "grids.hpp"
#include "oracles.hpp"

using namespace logfp;

TEST_CASE("ball volume quadrature is exact") {
    for (int d : {1, 2, 3, 5}) {
        RadialGrid g = RadialGrid::blended(d, 2.5, 60, 200);
        RadialField one(g, [](double) { return 1.0; });
        const double vol = weighted_integral(one, [](double) { return 1.0; });
        CHECK(vol == doctest::Approx(ball_volume(d, 2.5)).epsilon(1e-10));
    }
}

TEST_CASE("weighted_norm_sq basic values") {
    RadialGrid g = RadialGrid::blended(3, 1.0, 80, 240);
    SUBCASE("zero field") {
        RadialField z(g);
        CHECK(weighted_norm_sq(z, [](double) { return 1.0; }) == 0.0);
    }
    SUBCASE("unit field, unit weight equals the ball volume") {
        RadialField one(g, [](double) { return 1.0; });
        CHECK(weighted_norm_sq(one, [](double) { return 1.0; }) ==
              doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-10));
    }
}

TEST_CASE("Gaussian norm against the adaptive-quadrature oracle") {
    const double want = oracles::radial_integral(3, [](double r) { return std::exp(-r * r); }, 12.0);
    // Gauss-panel grid: near machine agreement
    RadialGrid gp = RadialGrid::gauss_panels(3, 1e-6, 12.0, 60, 200);
    RadialField fgp(gp, [](double r) { return std::exp(-0.5 * r * r); });
    CHECK(weighted_norm_sq(fgp, [](double) { return 1.0; }) ==
          doctest::Approx(want).epsilon(1e-10));
    // centroid-cell grid: second-order agreement
    RadialGrid g = RadialGrid::blended(3, 12.0, 500, 2400, 1e-3);
    RadialField gauss(g, [](double r) { return std::exp(-0.5 * r * r); });
    CHECK(weighted_norm_sq(gauss, [](double) { return 1.0; }) ==
          doctest::Approx(want).epsilon(1e-5));
}

TEST_CASE("quadrature integrates low-degree polynomials with order >= 2") {
    // exact integral of r^2 over the d=3 ball of radius 2: 4 pi 2^5 / 5
    const double exact = 4.0 * M_PI * 32.0 / 5.0;
    auto err = [&](std::size_t n) {
        RadialGrid g = RadialGrid::blended(3, 2.0, n / 4, n, 1e-2);
        RadialField f(g, [](double r) { return r; });
        return std::abs(weighted_norm_sq(f, [](double) { return 1.0; }) - exact) / exact;
    };
    const double e1 = err(8000), e2 = err(16000);
    CHECK(e2 < 1e-8);
    CHECK(e1 / e2 > 3.0);  // empirical order ~2
}

TEST_CASE("weighted_norm_sq is homogeneous of degree 2") {
    RadialGrid g = RadialGrid::blended(3, 8.0, 60, 300);
    RadialField f(g, [](double r) { return std::exp(-r) * (1.0 + r); });
    const double base = weighted_norm_sq(f, [](double r) { return 1.0 / (1.0 + r * r); });
    for (double lam : {0.5, 2.0, 7.25}) {
        RadialField s = f;
        for (double& v : s.values) v *= lam;
        const double scaled = weighted_norm_sq(s, [](double r) { return 1.0 / (1.0 + r * r); });
        CHECK(scaled == doctest::Approx(lam * lam * base).epsilon(1e-14));
    }
}

TEST_CASE("singular weights: origin node excluded, interior singularities rejected") {
    RadialGrid g = RadialGrid::blended(3, 4.0, 700, 1200, 1e-3, 1.0, /*include_origin=*/true);
    REQUIRE(g.nodes.front() == 0.0);
    RadialField f(g, [](double r) { return std::exp(-r); });
    // r^{-1} weight: the origin node is skipped, the rest integrates fine
    const double got = weighted_norm_sq(f, [](double r) { return r == 0.0 ? INFINITY : 1.0 / r; });
    const double want =
        oracles::radial_integral(3, [](double r) { return std::exp(-2.0 * r) / r; }, 4.0, 1e-12);
    CHECK(got == doctest::Approx(want).epsilon(1e-4));
    // a non-finite weight away from the origin names the offending node
    const double bad = g.nodes[10];
    CHECK_THROWS_AS(weighted_norm_sq(f, [bad](double r) { return r == bad ? INFINITY : 1.0; }),
                    std::domain_error);
}

TEST_CASE("phase grid construction enforces invariants") {
    CHECK_THROWS_AS(PhaseGrid::make(4, 64, 10.0, 8.0), std::invalid_argument);
    CHECK_THROWS_AS(PhaseGrid::make(64, 64, 10.0, 4.0), std::invalid_argument);
    PhaseGrid g = PhaseGrid::make(65, 129, 10.0, 8.0);
    CHECK(g.dx > 0.0);
    CHECK(g.dv > 0.0);
    CHECK(g.v_nodes[64] == 0.0);  // symmetric grid carries an exact zero node
}

TEST_CASE("phase_integral values") {
    PhaseGrid g = PhaseGrid::make(192, 128, 8.0, 8.0);
    SUBCASE("zero field") {
        PhaseField f(g);
        CHECK(phase_integral(f, [](double, double) { return 1.0; }) == 0.0);
    }
    SUBCASE("separable Gaussian equals the product of 1D integrals") {
        PhaseField f(g);
        for (std::size_t i = 0; i < g.nx(); ++i)
            for (std::size_t j = 0; j < g.nv(); ++j)
                f.at(i, j) = std::exp(-0.5 * g.x_nodes[i] * g.x_nodes[i]) *
                             std::exp(-0.25 * g.v_nodes[j] * g.v_nodes[j]);
        const double got = phase_integral(f, [](double, double) { return 1.0; });
        const double want = std::sqrt(2.0 * M_PI) * std::sqrt(4.0 * M_PI);
        CHECK(got == doctest::Approx(want).epsilon(1e-6));
    }
    SUBCASE("second moment of the unit Gaussian is 1") {
        PhaseField f(g);
        const double z = 1.0 / std::sqrt(2.0 * M_PI);
        for (std::size_t i = 0; i < g.nx(); ++i)
            for (std::size_t j = 0; j < g.nv(); ++j)
                f.at(i, j) = z * std::exp(-0.5 * g.v_nodes[j] * g.v_nodes[j]) *
                             std::exp(-g.x_nodes[i] * g.x_nodes[i]) / std::sqrt(M_PI);
        const double got = phase_integral(f, [](double, double v) { return v * v; });
        CHECK(got == doctest::Approx(1.0).epsilon(1e-8));
    }
}
