#include "rates.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace logfp {

void DecaySeries::validate_for_fit() const {
    if (times.size() != values.size()) throw std::invalid_argument("DecaySeries: size mismatch");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0 && !(times[i] > times[i - 1]))
            throw std::invalid_argument("DecaySeries '" + label + "': times not strictly increasing");
        if (!(values[i] > 0.0))
            throw std::invalid_argument("DecaySeries '" + label + "': nonpositive value at sample " +
                                        std::to_string(i));
    }
}

FitWindow default_fit_window(const DecaySeries& series) {
    if (series.times.empty()) throw std::invalid_argument("default_fit_window: empty series");
    const double t_hi = 0.95 * series.times.back();
    return {t_hi / 10.0, t_hi};
}

namespace {

struct LinFit {
    double slope, intercept;
};

// plain least squares of y against x
LinFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit: degenerate abscissae");
    return {(n * sxy - sx * sy) / denom, (sxx * sy - sx * sxy) / denom};
}

RateFit fit_on(const DecaySeries& series, const FitWindow& window, bool log_abscissa) {
    series.validate_for_fit();
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series.times[i];
        if (t < window.t_lo || t > window.t_hi) continue;
        if (log_abscissa && !(t > 0.0))
            throw std::invalid_argument("fit_decay_exponent: nonpositive time in window");
        xs.push_back(log_abscissa ? std::log(t) : t);
        ys.push_back(std::log(series.values[i]));
    }
    if (xs.size() < 10)
        throw std::invalid_argument("fit: window holds " + std::to_string(xs.size()) +
                                    " samples, need >= 10");
    const LinFit lf = least_squares(xs, ys);
    RateFit fit;
    fit.exponent = lf.slope;
    fit.intercept = lf.intercept;
    fit.window = window;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dev = std::abs(std::expm1(ys[i] - (lf.intercept + lf.slope * xs[i])));
        fit.residual = std::max(fit.residual, dev);
    }
    return fit;
}

}  // namespace

RateFit fit_decay_exponent(const DecaySeries& series, const FitWindow& window) {
    return fit_on(series, window, /*log_abscissa=*/true);
}

RateFit fit_exponential_rate(const DecaySeries& series, const FitWindow& window) {
    return fit_on(series, window, /*log_abscissa=*/false);
}

TheoremVerdict TheoremVerdict::quantitative(TheoremId id, const std::string& check, double expected,
                                            double measured, double tolerance, std::uint64_t hash) {
    TheoremVerdict v;
    v.theorem_id = id;
    v.check = check;
    v.expected = expected;
    v.measured = measured;
    v.tolerance = tolerance;
    v.pass = std::isfinite(measured) && std::abs(measured - expected) <= tolerance;
    v.config_hash = hash;
    return v;
}

TheoremVerdict TheoremVerdict::property(TheoremId id, const std::string& check, bool pass,
                                        std::uint64_t hash) {
    TheoremVerdict v;
    v.theorem_id = id;
    v.check = check;
    v.expected = 1.0;
    v.measured = pass ? 1.0 : 0.0;
    v.tolerance = 0.0;
    v.pass = pass;
    v.config_hash = hash;
    return v;
}

std::string theorem_id_name(TheoremId id) {
    switch (id) {
        case TheoremId::T1: return "T1";
        case TheoremId::T2: return "T2";
        case TheoremId::T3_corIA: return "T3_corIA";
        case TheoremId::T4_props: return "T4_props";
        case TheoremId::HN: return "HN";
        case TheoremId::CKN: return "CKN";
        case TheoremId::Spectral: return "Spectral";
    }
    return "?";
}

std::uint64_t fnv1a_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

bool write_verdicts_json(const std::vector<TheoremVerdict>& verdicts, const std::string& path) {
    nlohmann::json arr = nlohmann::json::array();
    bool all = true;
    for (const auto& v : verdicts) {
        all = all && v.pass;
        arr.push_back({{"theorem", theorem_id_name(v.theorem_id)},
                       {"check", v.check},
                       {"expected", v.expected},
                       {"measured", v.measured},
                       {"tolerance", v.tolerance},
                       {"pass", v.pass},
                       {"config_hash", v.config_hash}});
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_verdicts_json: cannot open " + path);
    out << arr.dump(2) << "\n";
    return all;
}

}  // namespace logfp
