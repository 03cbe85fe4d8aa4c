#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "potentials.hpp"

using namespace logfp;

TEST_CASE("potential evaluation") {
    CHECK(eval_potential(PotentialSpec::v2(2.0), 0.0) == 0.0);
    CHECK(eval_potential(PotentialSpec::v1(3.0), M_E) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(eval_potential(PotentialSpec::v2(1.0), std::sqrt(3.0)) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(eval_potential(PotentialSpec::none(), 5.0) == 0.0);
    CHECK_THROWS_AS(eval_potential(PotentialSpec::v1(1.0), 0.0), std::domain_error);
}

TEST_CASE("decaying profile values") {
    ProfileParams p;
    p.c_star = 1.0;
    p.gamma = 1.7;
    p.d = 3;
    p.sigma = 0.0;
    CHECK(u_star(p, 0.0, 1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(u_star(p, 0.0, 0.0), std::domain_error);

    // time decay at fixed r: exponent (d - gamma)/2
    ProfileParams q = p;
    q.gamma = 1.0;
    const double ratio = u_star(q, 4.0, 2.0) / u_star(q, 0.0, 2.0);
    const double expected = std::pow(9.0, -1.0) * std::exp(-2.0 / 9.0 + 2.0);
    CHECK(ratio == doctest::Approx(expected).epsilon(1e-12));
    // pure amplitude factor at the scale-matched radius pair
    CHECK(std::pow(1.0 + 2.0 * 4.0, -0.5 * (q.d - q.gamma)) == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("gamma = 0 profile keeps its mass under quadrature") {
    ProfileParams p;
    p.gamma = 0.0;
    p.d = 3;
    p.sigma = 0.0;
    RadialGrid g = RadialGrid::gauss_panels(3, 1e-6, 40.0, 60, 400);
    for (double t : {0.0, 1.0, 4.0}) {
        RadialField f(g, [&](double r) { return u_star(p, t, r); });
        const double mass = weighted_integral(f, [](double) { return 1.0; });
        const double want = oracles::radial_integral(
            3, [&](double r) { return u_star(p, t, r); }, 40.0, 0.0, 1e-13);
        CHECK(mass == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("uniform decay amplitude bound") {
    CHECK(unif_max_bound(2.0, M_E / 4.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(unif_max_bound(2.0, M_E / 8.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(unif_max_bound(0.0, 1.0), std::domain_error);

    // brute-force maximization oracle: for gamma < 0 the max of r^{-gamma} e^{-r^2/(4t)}
    // over r > 0 is finite and equals the closed form
    const double gamma = -1.3, t = 0.7;
    double best = 0.0;
    for (double r = 1e-4; r < 30.0; r += 1e-4)
        best = std::max(best, std::pow(r, -gamma) * std::exp(-r * r / (4.0 * t)));
    CHECK(unif_max_bound(gamma, t) == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("spectral-gap formula and L^p exponents") {
    CHECK(lambda_star(3, 1.0) == doctest::Approx(2.0));
    CHECK(lambda_star(1, 0.25) == doctest::Approx(3.0));
    CHECK(lambda_star(5, 4.9) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(lambda_star(3, 0.0) == doctest::Approx(2.0));  // continuity extension
    CHECK_THROWS_AS(lambda_star(3, 3.5), std::domain_error);
    CHECK_THROWS_AS(lambda_star(3, -0.1), std::domain_error);

    CHECK(zeta_p(3, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(zeta_p(3, 1.0, 1e9) == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(zeta_p(3, 2.5, 2.0) == doctest::Approx(1.25));
    for (double g : {0.3, 1.1, 2.4}) CHECK(zeta_p(3, g, 1.0) == doctest::Approx(0.5 * lambda_star(3, g)));
}

TEST_CASE("decay rate constant of the unweighted estimate") {
    CHECK(decay_rate_constant(3, 0.0, 1.0, 1.0, 1.0) == doctest::Approx(4.0 / 3.0));
    CHECK(decay_rate_constant(4, 0.5, 1.0, 1.0, 1.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(decay_rate_constant(3, 0.5, 1.0, 1.0, 1.0), std::domain_error);
    // nonincreasing in gamma on [0, (d-2)/2)
    double prev = 1e300;
    for (double g : {-0.5, 0.0, 0.2, 0.4}) {
        const double c = decay_rate_constant(3, g, 1.0, 1.0, 1.0);
        CHECK(c <= prev + 1e-15);
        prev = c;
    }
}

TEST_CASE("Schrodinger potential closed form") {
    SUBCASE("free case") {
        for (double r : {0.3, 1.0, 2.5})
            CHECK(schrodinger_psi(3, 0.0, 0.0, r) == doctest::Approx((r * r - 6.0) / 4.0));
    }
    SUBCASE("finite-difference cross-check on the rescaled potential") {
        const int d = 3;
        const double gamma = 1.5, sigma = 1.0;
        SelfSimilarPotential phi{gamma, sigma};
        for (double r : {0.5, 1.0, 2.0}) {
            // psi = |grad Phi|^2/4 - Lap Phi / 2 with Lap in d dimensions
            const double dphi = oracles::fd_derivative([&](double x) { return phi.phi(x); }, r);
            const double d2phi = oracles::fd_second([&](double x) { return phi.phi(x); }, r);
            const double lap = d2phi + (d - 1) / r * dphi;
            const double want = 0.25 * dphi * dphi - 0.5 * lap;
            CHECK(schrodinger_psi(d, gamma, sigma, r) == doctest::Approx(want).epsilon(1e-6));
        }
    }
    SUBCASE("leading quadratic growth") {
        const double r = 100.0;
        CHECK(schrodinger_psi(3, 1.0, 0.0, r) / (r * r / 4.0) == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("quasi-equilibrium is nondecreasing in rescaled time for gamma > 0") {
    ProfileParams p;
    p.gamma = 1.3;
    p.d = 3;
    p.sigma = 1.0;
    for (double xi : {0.1, 0.7, 1.9, 4.0}) {
        double prev = 0.0;
        for (double tau : {0.0, 0.5, 1.0, 2.0, 3.0}) {
            const double v = v_star(p, tau, xi);
            CHECK(v >= prev - 1e-15);
            prev = v;
        }
    }
}

TEST_CASE("mass matching of the profile amplitude") {
    RadialGrid g = RadialGrid::gauss_panels(3, 1e-7, 12.0, 120, 200);
    const double gamma = 2.5;
    const double mass0 = 3.7;
    const double c = match_c_star(g, gamma, 0.0, mass0);
    ProfileParams p;
    p.c_star = c;
    p.gamma = gamma;
    p.d = 3;
    p.sigma = 0.0;
    RadialField f(g, [&](double r) { return u_star(p, 0.0, r); });
    CHECK(weighted_integral(f, [](double) { return 1.0; }) ==
          doctest::Approx(mass0).epsilon(1e-12));
}
