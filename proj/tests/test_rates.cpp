#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "rates.hpp"

using namespace logfp;

namespace {

DecaySeries synthetic_power(double expo, double c = 2.0, std::size_t n = 60) {
    DecaySeries s;
    s.label = "synthetic";
    for (std::size_t k = 0; k < n; ++k) {
        const double t = 0.1 * std::pow(1.15, double(k));
        s.push(t, c * std::pow(t, expo));
    }
    return s;
}

}  // namespace

TEST_CASE("exact synthetic power law") {
    DecaySeries s = synthetic_power(-1.5);
    const RateFit fit = fit_decay_exponent(s, default_fit_window(s));
    CHECK(fit.exponent == doctest::Approx(-1.5).epsilon(1e-6));
    CHECK(fit.residual < 1e-9);
}

TEST_CASE("constant series fits exponent zero") {
    DecaySeries s = synthetic_power(0.0, 3.25);
    const RateFit fit = fit_decay_exponent(s, default_fit_window(s));
    CHECK(std::abs(fit.exponent) < 1e-9);
}

TEST_CASE("fit is invariant under value rescaling and time reindexing") {
    DecaySeries s = synthetic_power(-0.75);
    const RateFit base = fit_decay_exponent(s, default_fit_window(s));

    DecaySeries scaled = s;
    for (double& v : scaled.values) v *= 37.0;
    const RateFit f2 = fit_decay_exponent(scaled, default_fit_window(scaled));
    CHECK(f2.exponent == doctest::Approx(base.exponent).epsilon(1e-12));
    CHECK(f2.intercept != doctest::Approx(base.intercept));

    DecaySeries reindexed = s;
    for (std::size_t i = 0; i < reindexed.times.size(); ++i) reindexed.times[i] *= 5.0;
    for (std::size_t i = 0; i < reindexed.values.size(); ++i)
        reindexed.values[i] = 2.0 * std::pow(reindexed.times[i], -0.75);
    const RateFit f3 = fit_decay_exponent(reindexed, default_fit_window(reindexed));
    CHECK(f3.exponent == doctest::Approx(base.exponent).epsilon(1e-10));
}

TEST_CASE("exponential-rate fit on tau series") {
    DecaySeries s;
    for (int k = 0; k < 40; ++k) {
        const double tau = 0.1 * (k + 1);
        s.push(tau, 5.0 * std::exp(-2.35 * tau));
    }
    const RateFit fit = fit_exponential_rate(s, {1.0, 4.0});
    CHECK(fit.exponent == doctest::Approx(-2.35).epsilon(1e-9));
}

TEST_CASE("fit error paths") {
    DecaySeries s = synthetic_power(-1.0, 1.0, 12);
    CHECK_THROWS_AS(fit_decay_exponent(s, {1e9, 2e9}), std::invalid_argument);  // empty window
    DecaySeries bad = s;
    bad.values[3] = 0.0;
    CHECK_THROWS_AS(fit_decay_exponent(bad, default_fit_window(bad)), std::invalid_argument);
}

TEST_CASE("verdict bundle and negative control") {
    const std::uint64_t h = fnv1a_hash("config text");
    DecaySeries s = synthetic_power(-1.5);
    const RateFit fit = fit_decay_exponent(s, default_fit_window(s));

    auto good = TheoremVerdict::quantitative(TheoremId::T1, "exponent", -1.5, fit.exponent, 0.15, h);
    CHECK(good.pass);

    DecaySeries tampered = synthetic_power(-1.0);
    const RateFit bad = fit_decay_exponent(tampered, default_fit_window(tampered));
    auto fail = TheoremVerdict::quantitative(TheoremId::T1, "exponent", -1.5, bad.exponent, 0.15, h);
    CHECK_FALSE(fail.pass);

    const std::string path = "verdicts_test_tmp.json";
    CHECK(write_verdicts_json({good}, path));
    CHECK_FALSE(write_verdicts_json({good, fail}, path));
    CHECK(write_verdicts_json({}, path));  // empty bundle is not a failure
    std::remove(path.c_str());
}
