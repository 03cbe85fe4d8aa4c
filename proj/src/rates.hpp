#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace logfp {

/// A positive time series destined for log-log rate fitting.
struct DecaySeries {
    std::vector<double> times;   // strictly increasing, positive for fitting
    std::vector<double> values;  // strictly positive for fitting
    std::string label;

    void push(double t, double v) { times.push_back(t); values.push_back(v); }
    std::size_t size() const { return times.size(); }
    void validate_for_fit() const;  // throws on nonpositive values / bad times
};

struct FitWindow {
    double t_lo = 0.0;
    double t_hi = 0.0;
};

struct RateFit {
    double exponent = 0.0;   // slope of log(value) vs log(t)
    double intercept = 0.0;
    FitWindow window;
    double residual = 0.0;   // max relative deviation from the fit inside the window
};

/// Last decade of the series, excluding the final 5% (truncation guard).
FitWindow default_fit_window(const DecaySeries& series);

/// Least-squares power-law fit value ~ C * t^exponent over the window.
/// Requires >= 10 samples in the window and positive values.
RateFit fit_decay_exponent(const DecaySeries& series, const FitWindow& window);

/// Least-squares slope of log(value) vs t (exponential-in-time decay rate,
/// used for series sampled in the rescaled time tau). Returns the fit with
/// `exponent` holding d log(value)/dt.
RateFit fit_exponential_rate(const DecaySeries& series, const FitWindow& window);

enum class TheoremId { T1, T2, T3_corIA, T4_props, HN, CKN, Spectral };

struct TheoremVerdict {
    TheoremId theorem_id;
    std::string check;       // human-readable name of the criterion
    double expected = 0.0;
    double measured = 0.0;
    double tolerance = 0.0;  // pass iff |measured - expected| <= tolerance
    bool pass = false;
    std::uint64_t config_hash = 0;

    static TheoremVerdict quantitative(TheoremId id, const std::string& check, double expected,
                                       double measured, double tolerance, std::uint64_t hash);
    static TheoremVerdict property(TheoremId id, const std::string& check, bool pass,
                                   std::uint64_t hash);
};

std::string theorem_id_name(TheoremId id);
std::uint64_t fnv1a_hash(const std::string& s);

/// Serialize verdicts as a JSON array; returns true iff all pass.
bool write_verdicts_json(const std::vector<TheoremVerdict>& verdicts, const std::string& path);

}  // namespace logfp
