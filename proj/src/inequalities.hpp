#pragma once

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "grids.hpp"

namespace logfp {

enum class InequalityName { Nash, Hardy, HardyNash, HardyNash2, CKN_hom, CKN_inhom };
enum class EnvelopeDirection { UpperEnvelope, LowerEnvelope };

std::string inequality_name(InequalityName n);

struct InequalityEstimate {
    InequalityName name = InequalityName::Nash;
    std::map<std::string, double> params;   // d, gamma, delta, eta, k, beta as applicable
    double constant = 0.0;
    EnvelopeDirection direction = EnvelopeDirection::LowerEnvelope;
    std::string optimizer;                  // family descriptor + iterations + best trial id
    int trials = 0;
    double worst_margin = 0.0;              // min over trials of (rhs - lhs)/rhs
};

/// Radial trial r^p (1 + a1 r + a2 r^2) exp(-s r^q) with analytic derivative.
struct RadialTrial {
    double p = 0.0, a1 = 0.0, a2 = 0.0, s = 1.0, q = 2.0;
    double value(double r) const;
    double deriv(double r) const;
    std::string id() const;
};

/// Seeded generator over the trial family (plus Hardy-type near-optimizers
/// with p close to -1/2 resp. (2-d)/2 regularized by the exponential cutoff).
struct TrialFamily {
    explicit TrialFamily(std::uint64_t seed) : rng(seed) {}
    std::mt19937_64 rng;
    RadialTrial nash_like();
    RadialTrial hardy_like(int d);
};

/// Quadrature grid used by all estimators (composite Gauss-Legendre panels).
RadialGrid inequality_grid(int d, double r_max = 60.0);

// --- raw quotients -----------------------------------------------------------

/// ||u||_2^{2+4/d} / (||u||_1^{4/d} ||grad u||_2^2); throws on zero gradient.
double nash_quotient(const RadialGrid& g, const RadialTrial& u);
/// Same quotient with the gradient taken by nonuniform centered differences.
double nash_quotient(const RadialField& u);

/// ||grad u||_2^2 / int u^2/|x|^2.
double hardy_quotient(const RadialGrid& g, const RadialTrial& u);

/// int |x|^{-gamma} v^2 / [ (int |x|^{-gamma} |grad v|^2)^a (int |x|^{k-gamma} |v|)^{2(1-a)} ],
/// a = (d+2k-gamma)/(d+2+2k-gamma).
double ckn_quotient_hom(const RadialGrid& g, const RadialTrial& v, double gamma, double k);

/// Power-weight variant: int |x|^beta v^2 / [ (int |x|^beta |grad v|^2)^a (int |x|^{beta/2} |v|)^{2(1-a)} ],
/// a = d/(d+2), requires beta > -d.
double ckn1_quotient(const RadialGrid& g, const RadialTrial& v, double beta);

/// Inhomogeneous variant with <x> weights (and optional center shift; the
/// shifted integrals are reduced to spherical averages evaluated by quadrature).
double ckn_quotient_inhom(int d, const RadialTrial& v, double gamma, double k, double shift = 0.0);

// --- envelopes and checks ----------------------------------------------------

/// max of nash_quotient over the optimized family: a lower envelope of the
/// optimal constant (a maximum over members never exceeds the supremum).
InequalityEstimate nash_envelope_estimate(int d, std::uint64_t seed, int n_random = 200);

/// inf of hardy_quotient over the tuned family: an upper envelope of (d-2)^2/4.
InequalityEstimate hardy_rayleigh(int d, std::uint64_t seed, int n_random = 200);

/// C_delta = c_nash / (1 - 4 delta/(d-2)^2); requires delta < (d-2)^2/4.
double hardy_nash_constant(int d, double delta, double c_nash);

struct CheckReport {
    bool holds = true;
    int trials = 0;
    double worst_margin = 1e300;  // min of (rhs - lhs)/rhs over trials
    std::string worst_trial;
};

/// ||u||_2^{2+4/d} <= C_delta (||grad u||^2 - delta int u^2/|x|^2) ||u||_1^{4/d} on random trials.
CheckReport hardy_nash_check(int d, double delta, double c_nash, int n_trials, std::uint64_t seed);

/// Two-weight variant with <x>^-2, <x>^-4 terms and constant
/// C = c_nash / min{1-4delta/(d-2)^2, 1-4eta/(d^2-4)}; also verifies the
/// quadratic-form nonnegativity behind it at alpha = (d-2)/2.
CheckReport hardy_nash2_check(int d, double delta, double eta, double c_nash, int n_trials,
                              std::uint64_t seed);

/// Witness that delta above (d-2)^2/4 breaks the bracket: returns a trial with
/// ||grad u||^2 - delta int u^2/|x|^2 < 0.
bool hardy_threshold_witness(int d, double delta, std::uint64_t seed, RadialTrial* out = nullptr);

/// log-log slope of the translated quotient
///   Q[v_n] = (int |x|^{-gamma}|grad v_n|^2)^a (int |x|^{-gamma}|v_n|)^{2(1-a)} / int |x|^{-gamma} v_n^2
/// against n, for v_n(x) = v(x + n e); expected -(1-a) gamma, a = (d-gamma)/(d-gamma+2).
double translation_degeneracy_slope(int d, double gamma, const std::vector<double>& n_list);

/// Envelope check of the inhomogeneous inequality over random trials plus a
/// shift scan (the <x>-weighted quotient keeps a positive floor under shifts).
struct InhomReport {
    InequalityEstimate envelope;
    bool holds_on_trials = true;
    double shift_floor = 0.0;  // min quotient over the shift scan
};
InhomReport ckn_inhom_check(int d, double gamma, double k, int n_trials, std::uint64_t seed);

/// beta = 2 - d + sqrt((d-2)^2 - 4 delta) and the change-of-variables check
/// v = |x|^{-beta/2} u mapping the power-weight quotient to the Hardy-reduced
/// one: returns max relative mismatch of the two quotients over trials.
struct BetaBridge {
    double beta = 0.0;
    double delta_roundtrip = 0.0;  // -beta^2/4 - beta(d-2)/2
    double worst_identity_error = 0.0;
};
BetaBridge ckn_beta_bridge(int d, double delta, int n_trials, std::uint64_t seed);

}  // namespace logfp
