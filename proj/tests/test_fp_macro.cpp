#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fp_macro.hpp"
#include "oracles.hpp"

using namespace logfp;

namespace {

RadialGrid heat_grid(std::size_t n_uniform = 700, double r_max = 24.0) {
    return RadialGrid::blended(3, r_max, 80, n_uniform, 1e-4);
}

double rel_l2_error(const RadialField& u, const std::function<double(double)>& ref) {
    const RadialGrid& g = *u.grid;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = ref(g.nodes[i]);
        num += g.weights[i] * (u.values[i] - r) * (u.values[i] - r);
        den += g.weights[i] * r * r;
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("free diffusion matches the heat kernel") {
    RadialGrid g = heat_grid();
    MacroSolverConfig cfg;
    cfg.spec = PotentialSpec::none();
    cfg.d = 3;
    cfg.grid = &g;
    cfg.dt = 0.0025;
    cfg.t_end = 1.0;
    RadialField u(g, [](double r) { return oracles::heat_kernel(3, 1.0, r); });
    double t = 1.0;
    for (int s = 0; s < 400; ++s) {
        u = step_macro(u, cfg, t, cfg.dt);
        t += cfg.dt;
    }
    CHECK(rel_l2_error(u, [&](double r) { return oracles::heat_kernel(3, t, r); }) < 1e-3);
}

TEST_CASE("self-similar equilibrium is numerically stationary") {
    RadialGrid g = RadialGrid::blended(3, 9.0, 250, 500, 1e-3);
    MacroSolverConfig cfg;
    cfg.spec = PotentialSpec::v1(1.0);
    cfg.d = 3;
    cfg.grid = &g;
    cfg.frame = Frame::SelfSimilar;
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    ProfileParams p;
    p.gamma = 1.0;
    p.d = 3;
    p.sigma = 0.0;
    RadialField v(g, [&](double r) { return v_star(p, 0.0, r); });
    const RadialField v0 = v;
    double tau = 0.0;
    for (int s = 0; s < 100; ++s) {
        v = step_macro(v, cfg, tau, cfg.dt);
        tau += cfg.dt;
    }
    // relative L2 drift per unit rescaled time
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        num += g.weights[i] * (v.values[i] - v0.values[i]) * (v.values[i] - v0.values[i]);
        den += g.weights[i] * v0.values[i] * v0.values[i];
    }
    CHECK(std::sqrt(num / den) / tau < 1e-6);
}

TEST_CASE("mass conservation and positivity across 1000 steps") {
    RadialGrid g = RadialGrid::blended(3, 20.0, 100, 300);
    MacroSolverConfig cfg;
    cfg.spec = PotentialSpec::v2(1.0);
    cfg.d = 3;
    cfg.grid = &g;
    cfg.dt = 0.01;
    cfg.t_end = 10.0;
    RadialField u(g, [](double r) { return std::exp(-0.5 * r * r); });
    const double mass0 = weighted_integral(u, [](double) { return 1.0; });
    double t = 0.0;
    for (int s = 0; s < 1000; ++s) {
        u = step_macro(u, cfg, t, cfg.dt);
        t += cfg.dt;
        for (double v : u.values) REQUIRE(v >= 0.0);
    }
    const double mass1 = weighted_integral(u, [](double) { return 1.0; });
    CHECK(std::abs(mass1 - mass0) / mass0 < 1e-10);
}

TEST_CASE("weighted energy is nonincreasing along the discrete flow") {
    RadialGrid g = RadialGrid::blended(3, 20.0, 150, 350, 1e-4);
    for (auto spec : {PotentialSpec::v2(1.0), PotentialSpec::v2(-0.5), PotentialSpec::none()}) {
        MacroSolverConfig cfg;
        cfg.spec = spec;
        cfg.d = 3;
        cfg.grid = &g;
        cfg.dt = 0.05;
        cfg.t_end = 5.0;
        RadialField u(g, [](double r) { return std::exp(-0.7 * r * r) * (1.0 + 0.3 * std::sin(r)); });
        for (double& v : u.values) v = std::abs(v);
        double t = 0.0;
        double prev_w = weighted_norm_sq(u, [&](double r) { return std::exp(eval_potential(spec, r)); });
        double prev_l2 = weighted_norm_sq(u, [](double) { return 1.0; });
        for (int s = 0; s < 60; ++s) {
            u = step_macro(u, cfg, t, cfg.dt);
            t += cfg.dt;
            const double w = weighted_norm_sq(u, [&](double r) { return std::exp(eval_potential(spec, r)); });
            CHECK(w <= prev_w * (1.0 + 1e-12));
            prev_w = w;
            if (spec.gamma <= 0.0) {
                const double l2 = weighted_norm_sq(u, [](double) { return 1.0; });
                CHECK(l2 <= prev_l2 * (1.0 + 1e-12));
                prev_l2 = l2;
            }
        }
    }
}

TEST_CASE("scheme convergence order in space and time") {
    // L2 error against the heat kernel after a short run: O(dt) + O(h^2)
    auto run_err = [&](std::size_t n_uni, double dt) {
        RadialGrid g = heat_grid(n_uni, 16.0);
        MacroSolverConfig cfg;
        cfg.spec = PotentialSpec::none();
        cfg.d = 3;
        cfg.grid = &g;
        cfg.dt = dt;
        cfg.t_end = 1.0;
        RadialField u(g, [](double r) { return oracles::heat_kernel(3, 1.0, r); });
        double t = 1.0;
        const int steps = int(std::round(0.5 / dt));
        for (int s = 0; s < steps; ++s) {
            u = step_macro(u, cfg, t, dt);
            t += dt;
        }
        return rel_l2_error(u, [&](double r) { return oracles::heat_kernel(3, t, r); });
    };
    // halving h with tiny dt: error drops ~4x
    const double es1 = run_err(250, 1e-3), es2 = run_err(500, 1e-3);
    CHECK(es1 / es2 > 3.0);
    // halving dt with fine grid: error drops ~2x
    const double et1 = run_err(900, 0.02), et2 = run_err(900, 0.01);
    CHECK(et1 / et2 > 1.6);
}

TEST_CASE("run_macro: free-decay exponent and trivial zero datum") {
    RadialGrid g = RadialGrid::blended(3, 48.0, 120, 480);
    MacroSolverConfig cfg;
    cfg.spec = PotentialSpec::none();
    cfg.d = 3;
    cfg.grid = &g;
    cfg.dt = 0.2;
    cfg.t_end = 30.0;
    cfg.n_samples = 60;
    RadialField u0(g, [](double r) { return std::exp(-0.5 * r * r); });
    MacroTrajectory traj = run_macro(u0, cfg);
    const DecaySeries& l2 = traj.series.at("l2");
    const RateFit fit = fit_decay_exponent(l2, default_fit_window(l2));
    CHECK(fit.exponent == doctest::Approx(-1.5).epsilon(0.1));

    RadialField z(g);
    MacroTrajectory ztraj = run_macro(z, cfg);
    for (const auto& [k, s] : ztraj.series)
        if (k != "chi_square_vs_profile")
            for (double v : s.values) CHECK(v == 0.0);
}

TEST_CASE("weighted decay exponent for the log potential") {
    RadialGrid g = RadialGrid::blended(3, 48.0, 150, 480, 1e-4);
    MacroSolverConfig cfg;
    cfg.spec = PotentialSpec::v2(1.0);
    cfg.d = 3;
    cfg.grid = &g;
    cfg.dt = 0.2;
    cfg.t_end = 30.0;
    cfg.n_samples = 60;
    RadialField u0(g, [](double r) { return std::exp(-0.5 * r * r); });
    MacroTrajectory traj = run_macro(u0, cfg);
    const DecaySeries& s = traj.series.at("l2_weighted_eV");
    const RateFit fit = fit_decay_exponent(s, default_fit_window(s));
    CHECK(fit.exponent == doctest::Approx(-1.0).epsilon(0.1));
}

TEST_CASE("supersolution comparison") {
    RadialGrid g = RadialGrid::blended(3, 9.0, 220, 420, 1e-3);
    ProfileParams p;
    p.gamma = 1.0;
    p.d = 3;
    p.sigma = 0.0;
    p.c_star = 1.0;
    MacroSolverConfig cfg;
    cfg.spec = PotentialSpec::v1(1.0);
    cfg.d = 3;
    cfg.grid = &g;
    cfg.frame = Frame::SelfSimilar;
    cfg.dt = 0.01;
    cfg.t_end = 1.5;
    cfg.n_samples = 30;

    SUBCASE("half the bound stays below it") {
        RadialField u0(g, [&](double r) { return 0.5 * v_star(p, 0.0, r); });
        MacroTrajectory traj = run_macro(u0, cfg);
        const SupersolutionReport rep = supersolution_check(traj, p);
        CHECK(rep.pass);
        CHECK(rep.worst_margin > 0.0);
    }
    SUBCASE("the equality case passes with discretization slack") {
        RadialField u0(g, [&](double r) { return v_star(p, 0.0, r); });
        MacroTrajectory traj = run_macro(u0, cfg);
        const SupersolutionReport rep = supersolution_check(traj, p);
        CHECK(rep.pass);
        CHECK(rep.worst_margin >= -1e-8);
    }
    SUBCASE("a violating initial datum is a precondition error") {
        RadialField u0(g, [&](double r) { return 2.0 * v_star(p, 0.0, r); });
        MacroTrajectory traj = run_macro(u0, cfg);
        CHECK_THROWS_AS(supersolution_check(traj, p), std::invalid_argument);
    }
}

TEST_CASE("gamma = 0 supersolution reduces to the heat-kernel comparison") {
    RadialGrid g = heat_grid(420, 16.0);
    MacroSolverConfig cfg;
    cfg.spec = PotentialSpec::none();
    cfg.d = 3;
    cfg.grid = &g;
    cfg.dt = 0.01;
    cfg.t_end = 2.0;
    cfg.n_samples = 20;
    // initial datum: the t = 1/2 heat kernel, bounded by the Gaussian profile
    // c (1+2t)^{-3/2} exp(-r^2/(2(1+2t))) with matching variance at t = 0
    ProfileParams p;
    p.gamma = 0.0;
    p.d = 3;
    p.sigma = 0.0;
    p.c_star = std::pow(2.0 * M_PI, -1.5);
    RadialField u0(g, [&](double r) { return oracles::heat_kernel(3, 0.5, r); });
    MacroTrajectory traj = run_macro(u0, cfg);
    // equality case in the original frame: the profile is the exact solution,
    // so the margin is pure discretization error
    const SupersolutionReport rep = supersolution_check(traj, p, 1e-4);
    CHECK(rep.pass);
    // closed form: the solution IS the heat kernel at 1/2 + t, equal to the bound
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const double err = rel_l2_error(traj.snapshots[s], [&](double r) {
            return oracles::heat_kernel(3, 0.5 + traj.times[s], r);
        });
        CHECK(err < 2e-3);
    }
}

TEST_CASE("closed moment bound") {
    CHECK(moment_bound_closed(2.0, 3, 1.0, 7.5, 2.0, 0.0) == doctest::Approx(7.5));
    CHECK(moment_bound_closed(2.0, 3, 1.0, 1.0, 1.0, 1.0) == doctest::Approx(5.0));
    CHECK_THROWS_AS(moment_bound_closed(1.0, 3, 1.0, 1.0, 1.0, 1.0), std::domain_error);

    // simulated second moment stays at (or below) the bound for the scale-invariant
    // potential, where the k = 2 moment identity is saturated
    RadialGrid g = RadialGrid::blended(3, 40.0, 150, 500, 1e-4);
    MacroSolverConfig cfg;
    cfg.spec = PotentialSpec::v1(1.0);
    cfg.d = 3;
    cfg.grid = &g;
    cfg.dt = 0.05;
    cfg.t_end = 20.0;
    cfg.n_samples = 40;
    cfg.k_moment = 2.0;
    RadialField u0(g, [](double r) { return std::exp(-0.5 * r * r); });
    const double M0 = weighted_integral(u0, [](double) { return 1.0; });
    const double M20 = weighted_integral(u0, [](double r) { return r * r; });
    MacroTrajectory traj = run_macro(u0, cfg);
    const DecaySeries& m2 = traj.series.at("moment_k");
    for (std::size_t i = 0; i < m2.size(); ++i) {
        const double bound = moment_bound_closed(2.0, 3, 1.0, M20, M0, m2.times[i]);
        CHECK(m2.values[i] <= bound * (1.0 + 1e-3));
    }
}

TEST_CASE("chi-square distance vanishes on the profile itself") {
    RadialGrid g = RadialGrid::blended(3, 9.0, 200, 400, 1e-3);
    ProfileParams p;
    p.gamma = 2.5;
    p.d = 3;
    p.sigma = 0.0;
    p.c_star = 0.8;
    MacroTrajectory traj;
    traj.frame = Frame::SelfSimilar;
    traj.cfg.grid = &g;
    traj.cfg.frame = Frame::SelfSimilar;
    for (double tau : {0.1, 0.5, 1.0}) {
        traj.times.push_back(tau);
        traj.snapshots.emplace_back(g, [&](double r) { return v_star(p, tau, r); });
    }
    const DecaySeries chi = chi_square_distance(traj, p);
    for (double v : chi.values) CHECK(v == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("frame consistency for the scale-invariant potential") {
    // evolve in original variables, transform, and compare against the
    // self-similar evolution at the matched pair (t, tau)
    const double gamma = 1.0;
    RadialGrid go = RadialGrid::blended(3, 40.0, 250, 700, 1e-4);
    RadialGrid gs = RadialGrid::blended(3, 10.0, 250, 500, 1e-4);

    MacroSolverConfig co;
    co.spec = PotentialSpec::v1(gamma);
    co.d = 3;
    co.grid = &go;
    co.dt = 0.002;
    co.t_end = 3.0;
    MacroSolverConfig cs = co;
    cs.grid = &gs;
    cs.frame = Frame::SelfSimilar;

    auto init = [](double r) { return std::exp(-0.5 * r * r) * (1.0 + 0.2 * std::exp(-(r - 1.0) * (r - 1.0))); };
    RadialField uo(go, init), vs(gs, init);

    const double t_end = 3.0, tau_end = 0.5 * std::log(1.0 + 2.0 * t_end);
    double t = 0.0;
    while (t < t_end - 1e-12) {
        uo = step_macro(uo, co, t, co.dt);
        t += co.dt;
    }
    double tau = 0.0;
    const double dtau = 0.002;
    while (tau < tau_end - 1e-12) {
        const double step = std::min(dtau, tau_end - tau);
        vs = step_macro(vs, cs, tau, step);
        tau += step;
    }
    // transform: v(tau, xi) = (1+2t)^{d/2} u(t, xi sqrt(1+2t)); interpolate the
    // smooth conjugated field e^{V} u to handle the r^{-gamma} profile shape
    const double s = std::sqrt(1.0 + 2.0 * t_end);
    std::vector<double> qx(go.size()), qy(go.size());
    for (std::size_t i = 0; i < go.size(); ++i) {
        qx[i] = go.nodes[i];
        qy[i] = std::pow(go.nodes[i], gamma) * uo.values[i];
    }
    oracles::Pchip interp(qx, qy);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        const double xi = gs.nodes[i];
        if (xi * s > go.nodes.back() || xi * s < go.nodes.front()) continue;
        const double u_at = interp(xi * s) / std::pow(xi * s, gamma);
        const double v_from_u = std::pow(1.0 + 2.0 * t_end, 1.5) * u_at;
        num += gs.weights[i] * (v_from_u - vs.values[i]) * (v_from_u - vs.values[i]);
        den += gs.weights[i] * vs.values[i] * vs.values[i];
    }
    CHECK(std::sqrt(num / den) < 1e-3);
}

TEST_CASE("signed spherical-harmonic amplitudes are allowed for mode_k > 0") {
    RadialGrid g = RadialGrid::blended(3, 9.0, 150, 300, 1e-3);
    MacroSolverConfig cfg;
    cfg.spec = PotentialSpec::v1(2.5);
    cfg.d = 3;
    cfg.grid = &g;
    cfg.frame = Frame::SelfSimilar;
    cfg.mode_k = 1;
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    RadialField a0(g, [](double r) { return r * std::exp(-r * r) * std::cos(3.0 * r); });
    double tau = 0.0;
    RadialField a = a0;
    for (int s = 0; s < 50; ++s) {
        a = step_macro(a, cfg, tau, cfg.dt);
        tau += cfg.dt;
    }
    bool has_negative = false;
    for (double v : a.values) has_negative = has_negative || v < 0.0;
    CHECK(has_negative);  // no positivity clamp in the sector evolution
}
