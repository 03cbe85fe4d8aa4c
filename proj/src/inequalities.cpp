#include "inequalities.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace logfp {

std::string inequality_name(InequalityName n) {
    switch (n) {
        case InequalityName::Nash: return "Nash";
        case InequalityName::Hardy: return "Hardy";
        case InequalityName::HardyNash: return "HardyNash";
        case InequalityName::HardyNash2: return "HardyNash2";
        case InequalityName::CKN_hom: return "CKN_hom";
        case InequalityName::CKN_inhom: return "CKN_inhom";
    }
    return "?";
}

double RadialTrial::value(double r) const {
    return std::pow(r, p) * (1.0 + a1 * r + a2 * r * r) * std::exp(-s * std::pow(r, q));
}

double RadialTrial::deriv(double r) const {
    const double poly = 1.0 + a1 * r + a2 * r * r;
    const double dpoly = a1 + 2.0 * a2 * r;
    const double e = std::exp(-s * std::pow(r, q));
    const double rp = std::pow(r, p);
    const double drp = (p == 0.0) ? 0.0 : p * std::pow(r, p - 1.0);
    const double de = -s * q * std::pow(r, q - 1.0) * e;
    return drp * poly * e + rp * dpoly * e + rp * poly * de;
}

std::string RadialTrial::id() const {
    std::ostringstream ss;
    ss << "r^" << p << "*(1+" << a1 << "r+" << a2 << "r^2)*exp(-" << s << " r^" << q << ")";
    return ss.str();
}

RadialTrial TrialFamily::nash_like() {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    RadialTrial t;
    t.p = 2.0 * U(rng);
    t.a1 = 0.8 * U(rng);
    t.a2 = 0.8 * U(rng);
    t.s = 0.3 + 2.5 * U(rng);
    t.q = 1.0 + 1.5 * U(rng);
    return t;
}

RadialTrial TrialFamily::hardy_like(int d) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    RadialTrial t;
    const double p_edge = (d == 3) ? -0.5 : 0.5 * (2.0 - d);
    t.p = p_edge + 0.02 + 0.3 * U(rng);  // regularized approach to the Hardy exponent
    t.s = 0.5 + 1.5 * U(rng);
    t.q = 1.0;
    return t;
}

RadialGrid inequality_grid(int d, double r_max) {
    return RadialGrid::gauss_panels(d, 1e-7, r_max, 180, 260, 1.0, 8);
}

namespace {

double integrate(const RadialGrid& g, const std::function<double(double)>& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * f(g.nodes[i]);
    return s;
}

struct NashParts {
    double n1, n2, g2;
};

NashParts nash_parts(const RadialGrid& g, const RadialTrial& u) {
    NashParts p;
    p.n1 = integrate(g, [&](double r) { return std::abs(u.value(r)); });
    p.n2 = integrate(g, [&](double r) { const double v = u.value(r); return v * v; });
    p.g2 = integrate(g, [&](double r) { const double v = u.deriv(r); return v * v; });
    if (!(p.g2 > 0.0)) throw std::domain_error("nash quotient: zero gradient trial excluded");
    if (!std::isfinite(p.n1) || !std::isfinite(p.n2) || !std::isfinite(p.g2))
        throw std::domain_error("nash quotient: divergent weighted integral, trial rejected");
    return p;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < iters; ++it) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a); fd = f(d);
        }
    }
    return fc > fd ? c : d;
}

double slope_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

double nash_quotient(const RadialGrid& g, const RadialTrial& u) {
    const NashParts p = nash_parts(g, u);
    const double d = double(g.d);
    return std::pow(p.n2, 1.0 + 2.0 / d) / (std::pow(p.n1, 4.0 / d) * p.g2);
}

double nash_quotient(const RadialField& u) {
    const RadialGrid& g = *u.grid;
    const double d = double(g.d);
    double n1 = 0, n2 = 0, g2 = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        n1 += g.weights[i] * std::abs(u.values[i]);
        n2 += g.weights[i] * u.values[i] * u.values[i];
        double du;
        if (i == 0) du = (u.values[1] - u.values[0]) / (g.nodes[1] - g.nodes[0]);
        else if (i + 1 == g.size())
            du = (u.values[i] - u.values[i - 1]) / (g.nodes[i] - g.nodes[i - 1]);
        else {
            const double hl = g.nodes[i] - g.nodes[i - 1], hr = g.nodes[i + 1] - g.nodes[i];
            du = (hl / hr * (u.values[i + 1] - u.values[i]) +
                  hr / hl * (u.values[i] - u.values[i - 1])) / (hl + hr);
        }
        g2 += g.weights[i] * du * du;
    }
    if (!(g2 > 0.0)) throw std::domain_error("nash_quotient: zero gradient field");
    return std::pow(n2, 1.0 + 2.0 / d) / (std::pow(n1, 4.0 / d) * g2);
}

double hardy_quotient(const RadialGrid& g, const RadialTrial& u) {
    const double g2 = integrate(g, [&](double r) { const double v = u.deriv(r); return v * v; });
    const double h2 = integrate(g, [&](double r) { const double v = u.value(r); return v * v / (r * r); });
    if (!std::isfinite(h2) || !(h2 > 0.0))
        throw std::domain_error("hardy_quotient: divergent or vanishing singular integral");
    return g2 / h2;
}

double ckn_quotient_hom(const RadialGrid& g, const RadialTrial& v, double gamma, double k) {
    const int d = g.d;
    if (!(gamma < double(d)) || !(k >= 0.5 * gamma))
        throw std::domain_error("ckn_quotient_hom: needs gamma < d and k >= gamma/2");
    const double a = (d + 2.0 * k - gamma) / (d + 2.0 + 2.0 * k - gamma);
    const double lhs = integrate(g, [&](double r) { const double x = v.value(r); return std::pow(r, -gamma) * x * x; });
    const double grad = integrate(g, [&](double r) { const double x = v.deriv(r); return std::pow(r, -gamma) * x * x; });
    const double mom = integrate(g, [&](double r) { return std::pow(r, k - gamma) * std::abs(v.value(r)); });
    if (!std::isfinite(lhs) || !std::isfinite(grad) || !std::isfinite(mom) || !(grad > 0.0) || !(mom > 0.0))
        throw std::domain_error("ckn_quotient_hom: trial rejected (divergent integral)");
    return lhs / (std::pow(grad, a) * std::pow(mom, 2.0 * (1.0 - a)));
}

double ckn1_quotient(const RadialGrid& g, const RadialTrial& v, double beta) {
    const int d = g.d;
    if (!(beta > -double(d))) throw std::domain_error("ckn1_quotient: needs beta > -d");
    const double a = double(d) / (d + 2.0);
    const double lhs = integrate(g, [&](double r) { const double x = v.value(r); return std::pow(r, beta) * x * x; });
    const double grad = integrate(g, [&](double r) { const double x = v.deriv(r); return std::pow(r, beta) * x * x; });
    const double mom = integrate(g, [&](double r) { return std::pow(r, 0.5 * beta) * std::abs(v.value(r)); });
    return lhs / (std::pow(grad, a) * std::pow(mom, 2.0 * (1.0 - a)));
}

namespace {

// int_{R^d} wgt(|x|) F(|x - c|) dx for radial F supported in [0, smax], |c| = n:
// reduces to an s-integral against the spherical average of wgt at distance n.
double shifted_integral(int d, double n, double smax, const std::function<double(double)>& F,
                        const std::function<double(double)>& wgt) {
    static const int NS = 48, NM = 48;
    static std::vector<double> gx, gw;
    if (gx.empty()) {
        // Gauss-Legendre nodes via Newton on Legendre polynomials
        const int N = NS;
        gx.resize(N);
        gw.resize(N);
        for (int i = 0; i < N; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (N + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= N; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = N * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= N; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = N * (x * p1 - p0) / (x * x - 1.0);
            gx[i] = x;
            gw[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
    // angular normalization: |S^{d-2}| / |S^{d-1}| * int (1-mu^2)^{(d-3)/2} dmu = 1
    const double ang_norm = (d >= 2) ? sphere_surface(d - 1) / sphere_surface(d) : 1.0;
    auto sphere_avg = [&](double s) {
        if (n == 0.0) return wgt(s);
        double acc = 0.0;
        for (int m = 0; m < NM && m < int(gx.size()); ++m) {
            const double mu = gx[m];
            const double rad = std::sqrt(std::max(n * n + s * s - 2.0 * n * s * mu, 0.0));
            const double jac = (d >= 3) ? std::pow(std::max(1.0 - mu * mu, 0.0), 0.5 * (d - 3)) : 1.0;
            acc += gw[m] * jac * wgt(rad);
        }
        return ang_norm * acc;
    };
    double total = 0.0;
    const double sd = sphere_surface(d);
    for (int i = 0; i < NS; ++i) {
        const double s = 0.5 * smax * (gx[i] + 1.0);
        total += 0.5 * smax * gw[i] * F(s) * std::pow(s, d - 1) * sd * sphere_avg(s);
    }
    return total;
}

}  // namespace

double ckn_quotient_inhom(int d, const RadialTrial& v, double gamma, double k, double shift) {
    if (!(gamma < double(d)) || !(k >= 0.5 * gamma))
        throw std::domain_error("ckn_quotient_inhom: needs gamma < d and k >= gamma/2");
    const double a = (d + 2.0 * k - gamma) / (d + 2.0 + 2.0 * k - gamma);
    const double smax = 40.0;  // the family decays exponentially; extend if needed
    auto bra = [&](double r) { return std::pow(1.0 + r * r, -0.5 * gamma); };
    auto bram = [&](double r) { return std::pow(1.0 + r * r, 0.5 * (k - gamma)); };
    const double lhs = shifted_integral(d, shift, smax,
                                        [&](double s) { const double x = v.value(s); return x * x; }, bra);
    const double grad = shifted_integral(d, shift, smax,
                                         [&](double s) { const double x = v.deriv(s); return x * x; }, bra);
    const double mom = shifted_integral(d, shift, smax,
                                        [&](double s) { return std::abs(v.value(s)); }, bram);
    if (!(grad > 0.0) || !(mom > 0.0))
        throw std::domain_error("ckn_quotient_inhom: degenerate trial");
    return lhs / (std::pow(grad, a) * std::pow(mom, 2.0 * (1.0 - a)));
}

InequalityEstimate nash_envelope_estimate(int d, std::uint64_t seed, int n_random) {
    const RadialGrid g = inequality_grid(d);
    TrialFamily fam(seed);
    RadialTrial best;
    double best_q = 0.0;
    int best_idx = -1;
    for (int t = 0; t < n_random; ++t) {
        RadialTrial cand = fam.nash_like();
        const double q = nash_quotient(g, cand);
        if (q > best_q) { best_q = q; best = cand; best_idx = t; }
    }
    // coordinate-wise golden-section polish around the best member
    for (int pass = 0; pass < 3; ++pass) {
        best.s = golden_max([&](double s) { RadialTrial t = best; t.s = s; return nash_quotient(g, t); }, 0.2, 4.0, 40);
        best.q = golden_max([&](double q) { RadialTrial t = best; t.q = q; return nash_quotient(g, t); }, 0.8, 3.0, 40);
        best.p = golden_max([&](double p) { RadialTrial t = best; t.p = p; return nash_quotient(g, t); }, 0.0, 2.5, 40);
        best.a1 = golden_max([&](double a) { RadialTrial t = best; t.a1 = a; return nash_quotient(g, t); }, 0.0, 1.5, 40);
        best.a2 = golden_max([&](double a) { RadialTrial t = best; t.a2 = a; return nash_quotient(g, t); }, 0.0, 1.5, 40);
    }
    best_q = nash_quotient(g, best);
    InequalityEstimate est;
    est.name = InequalityName::Nash;
    est.params["d"] = d;
    est.constant = best_q;
    est.direction = EnvelopeDirection::LowerEnvelope;
    est.trials = n_random;
    std::ostringstream ss;
    ss << "poly*exp family, " << n_random << " draws + golden polish, seed member " << best_idx
       << ": " << best.id();
    est.optimizer = ss.str();
    est.worst_margin = 0.0;
    return est;
}

InequalityEstimate hardy_rayleigh(int d, std::uint64_t seed, int n_random) {
    if (d < 3) throw std::domain_error("hardy_rayleigh: needs d >= 3");
    const RadialGrid g = inequality_grid(d);
    TrialFamily fam(seed);
    double best = 1e300;
    std::string best_id;
    for (int t = 0; t < n_random; ++t) {
        RadialTrial cand = fam.hardy_like(d);
        const double q = hardy_quotient(g, cand);
        if (q < best) { best = q; best_id = cand.id(); }
    }
    // push the exponent toward the sharp edge, keeping the integrals resolved
    const double p_edge = (d == 3) ? -0.5 : 0.5 * (2.0 - d);
    RadialTrial edge;
    edge.q = 1.0;
    edge.s = 1.0;
    edge.p = golden_max([&](double p) { RadialTrial c = edge; c.p = p; return -hardy_quotient(g, c); },
                        p_edge + 0.015, p_edge + 0.4, 50);
    const double q_edge = hardy_quotient(g, edge);
    if (q_edge < best) { best = q_edge; best_id = edge.id(); }

    InequalityEstimate est;
    est.name = InequalityName::Hardy;
    est.params["d"] = d;
    est.constant = best;
    est.direction = EnvelopeDirection::UpperEnvelope;
    est.trials = n_random;
    est.optimizer = "regularized edge-exponent family, best " + best_id;
    est.worst_margin = best - 0.25 * (d - 2.0) * (d - 2.0);
    return est;
}

double hardy_nash_constant(int d, double delta, double c_nash) {
    const double cap = 0.25 * (d - 2.0) * (d - 2.0);
    if (!(delta < cap))
        throw std::domain_error("hardy_nash_constant: requires delta < (d-2)^2/4 (sharp threshold)");
    return c_nash / (1.0 - delta / cap);
}

CheckReport hardy_nash_check(int d, double delta, double c_nash, int n_trials, std::uint64_t seed) {
    const double C = hardy_nash_constant(d, delta, c_nash);
    const RadialGrid g = inequality_grid(d);
    TrialFamily fam(seed);
    CheckReport rep;
    rep.trials = n_trials;
    for (int t = 0; t < n_trials; ++t) {
        const RadialTrial u = (t % 4 == 3) ? fam.hardy_like(d) : fam.nash_like();
        const NashParts p = nash_parts(g, u);
        const double h2 = integrate(g, [&](double r) { const double v = u.value(r); return v * v / (r * r); });
        const double lhs = std::pow(p.n2, 1.0 + 2.0 / d);
        const double rhs = C * (p.g2 - delta * h2) * std::pow(p.n1, 4.0 / d);
        const double margin = (rhs - lhs) / std::max(std::abs(rhs), 1e-300);
        if (margin < rep.worst_margin) { rep.worst_margin = margin; rep.worst_trial = u.id(); }
        if (margin < -1e-9) rep.holds = false;
    }
    return rep;
}

CheckReport hardy_nash2_check(int d, double delta, double eta, double c_nash, int n_trials,
                              std::uint64_t seed) {
    const double cap1 = 0.25 * (d - 2.0) * (d - 2.0);
    const double cap2 = 0.25 * (double(d) * d - 4.0);
    if (!(delta < cap1) || !(eta < cap2))
        throw std::domain_error("hardy_nash2_check: (delta, eta) out of the admissible range");
    const double C = c_nash / std::min(1.0 - delta / cap1, 1.0 - eta / cap2);
    const RadialGrid g = inequality_grid(d);
    TrialFamily fam(seed);
    CheckReport rep;
    rep.trials = n_trials;
    const double alpha = 0.5 * (d - 2.0);
    for (int t = 0; t < n_trials; ++t) {
        const RadialTrial u = (t % 4 == 3) ? fam.hardy_like(d) : fam.nash_like();
        const NashParts p = nash_parts(g, u);
        const double b2 = integrate(g, [&](double r) { const double v = u.value(r); return v * v / (1.0 + r * r); });
        const double b4 = integrate(g, [&](double r) { const double v = u.value(r); return v * v / ((1.0 + r * r) * (1.0 + r * r)); });
        const double lhs = std::pow(p.n2, 1.0 + 2.0 / d);
        const double rhs = C * (p.g2 - delta * b2 - eta * b4) * std::pow(p.n1, 4.0 / d);
        double margin = (rhs - lhs) / std::max(std::abs(rhs), 1e-300);
        // quadratic-form nonnegativity behind the two-weight Hardy bound
        const double quad = p.g2 + alpha * (alpha - d + 2.0) * b2 - alpha * (alpha + 2.0) * b4;
        if (quad < -1e-10 * p.g2) { rep.holds = false; margin = std::min(margin, quad / p.g2); }
        if (margin < rep.worst_margin) { rep.worst_margin = margin; rep.worst_trial = u.id(); }
        if (margin < -1e-9) rep.holds = false;
    }
    return rep;
}

bool hardy_threshold_witness(int d, double delta, std::uint64_t seed, RadialTrial* out) {
    const RadialGrid g = inequality_grid(d);
    (void)seed;
    const double p_edge = (d == 3) ? -0.5 : 0.5 * (2.0 - d);
    for (double off = 0.05; off > 0.004; off *= 0.7) {
        RadialTrial t;
        t.p = p_edge + off;
        t.q = 1.0;
        t.s = 1.0;
        const double g2 = integrate(g, [&](double r) { const double v = t.deriv(r); return v * v; });
        const double h2 = integrate(g, [&](double r) { const double v = t.value(r); return v * v / (r * r); });
        if (g2 - delta * h2 < 0.0) {
            if (out) *out = t;
            return true;
        }
    }
    return false;
}

double translation_degeneracy_slope(int d, double gamma, const std::vector<double>& n_list) {
    if (!(gamma > 0.0) || !(gamma < double(d)))
        throw std::domain_error("translation_degeneracy_slope: gamma must lie in (0, d)");
    const double a = (d - gamma) / (d - gamma + 2.0);
    // fixed smooth bump supported in [0,1]
    auto F2 = [](double s) { const double b = (s < 1.0) ? (1 - s * s) * (1 - s * s) : 0.0; return b * b; };
    auto F1 = [](double s) { return (s < 1.0) ? (1 - s * s) * (1 - s * s) : 0.0; };
    auto G2 = [](double s) { const double b = (s < 1.0) ? -4.0 * s * (1 - s * s) : 0.0; return b * b; };
    auto wgt = [&](double r) { return std::pow(std::max(r, 1e-12), -gamma); };
    std::vector<double> qs;
    for (double n : n_list) {
        const double i2 = shifted_integral(d, n, 1.0, F2, wgt);
        const double i1 = shifted_integral(d, n, 1.0, F1, wgt);
        const double ig = shifted_integral(d, n, 1.0, G2, wgt);
        qs.push_back(std::pow(ig, a) * std::pow(i1, 2.0 * (1.0 - a)) / i2);
    }
    return slope_loglog(n_list, qs);
}

InhomReport ckn_inhom_check(int d, double gamma, double k, int n_trials, std::uint64_t seed) {
    const RadialGrid g = inequality_grid(d);
    TrialFamily fam(seed);
    InhomReport rep;
    double maxq = 0.0;
    std::vector<double> qs;
    for (int t = 0; t < n_trials; ++t) {
        RadialTrial u = fam.nash_like();
        // centered quotient evaluated on the radial quadrature grid (shift = 0)
        const double lhs = integrate(g, [&](double r) { const double v = u.value(r); return std::pow(1.0 + r * r, -0.5 * gamma) * v * v; });
        const double grad = integrate(g, [&](double r) { const double v = u.deriv(r); return std::pow(1.0 + r * r, -0.5 * gamma) * v * v; });
        const double mom = integrate(g, [&](double r) { return std::pow(1.0 + r * r, 0.5 * (k - gamma)) * std::abs(u.value(r)); });
        const double a = (d + 2.0 * k - gamma) / (d + 2.0 + 2.0 * k - gamma);
        const double q = lhs / (std::pow(grad, a) * std::pow(mom, 2.0 * (1.0 - a)));
        qs.push_back(q);
        maxq = std::max(maxq, q);
    }
    rep.envelope.name = InequalityName::CKN_inhom;
    rep.envelope.params = {{"d", double(d)}, {"gamma", gamma}, {"k", k}};
    rep.envelope.constant = 1.05 * maxq;  // envelope = max observed quotient x 1.05
    rep.envelope.direction = EnvelopeDirection::LowerEnvelope;
    rep.envelope.trials = n_trials;
    rep.envelope.optimizer = "max quotient over poly*exp family, 5% headroom";
    rep.envelope.worst_margin = 1e300;
    for (double q : qs) {
        const double m = (rep.envelope.constant - q) / rep.envelope.constant;
        rep.envelope.worst_margin = std::min(rep.envelope.worst_margin, m);
        if (q > rep.envelope.constant) rep.holds_on_trials = false;
    }
    // shift scan: the <x>-weighted quotient keeps a positive floor
    RadialTrial probe;
    probe.s = 1.0;
    probe.q = 2.0;
    rep.shift_floor = 1e300;
    for (double shift = 0.0; shift <= 10.0; shift += 1.0)
        rep.shift_floor = std::min(rep.shift_floor, ckn_quotient_inhom(d, probe, gamma, k, shift));
    return rep;
}

BetaBridge ckn_beta_bridge(int d, double delta, int n_trials, std::uint64_t seed) {
    const double cap = 0.25 * (d - 2.0) * (d - 2.0);
    if (!(delta < cap)) throw std::domain_error("ckn_beta_bridge: requires delta < (d-2)^2/4");
    BetaBridge bb;
    bb.beta = 2.0 - d + std::sqrt((d - 2.0) * (d - 2.0) - 4.0 * delta);
    bb.delta_roundtrip = -0.25 * bb.beta * bb.beta - 0.5 * bb.beta * (d - 2.0);
    const RadialGrid g = inequality_grid(d);
    TrialFamily fam(seed);
    for (int t = 0; t < n_trials; ++t) {
        RadialTrial u = fam.nash_like();
        u.p = std::max(u.p, 0.6);  // keep the by-parts boundary terms at zero
        // v = r^{-beta/2} u with derivative v' = r^{-beta/2}(u' - (beta/2) u / r)
        const double b = bb.beta;
        auto v = [&](double r) { return std::pow(r, -0.5 * b) * u.value(r); };
        auto dv = [&](double r) { return std::pow(r, -0.5 * b) * (u.deriv(r) - 0.5 * b * u.value(r) / r); };
        const double lhs_v = integrate(g, [&](double r) { const double x = v(r); return std::pow(r, b) * x * x; });
        const double grad_v = integrate(g, [&](double r) { const double x = dv(r); return std::pow(r, b) * x * x; });
        const double mom_v = integrate(g, [&](double r) { return std::pow(r, 0.5 * b) * std::abs(v(r)); });
        const double n2 = integrate(g, [&](double r) { const double x = u.value(r); return x * x; });
        const double gu = integrate(g, [&](double r) { const double x = u.deriv(r); return x * x; });
        const double h2 = integrate(g, [&](double r) { const double x = u.value(r); return x * x / (r * r); });
        const double n1 = integrate(g, [&](double r) { return std::abs(u.value(r)); });
        const double a = double(d) / (d + 2.0);
        const double q_ckn = lhs_v / (std::pow(grad_v, a) * std::pow(mom_v, 2.0 * (1.0 - a)));
        const double q_hn = n2 / (std::pow(gu - delta * h2, a) * std::pow(n1, 2.0 * (1.0 - a)));
        const double err = std::abs(q_ckn - q_hn) / std::max(q_hn, 1e-300);
        bb.worst_identity_error = std::max(bb.worst_identity_error, err);
    }
    return bb;
}

}  // namespace logfp
