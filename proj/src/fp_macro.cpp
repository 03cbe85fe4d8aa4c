#include "fp_macro.hpp"

#include <cmath>
#include <stdexcept>

namespace logfp {

void MacroSolverConfig::validate() const {
    if (!grid) throw std::invalid_argument("MacroSolverConfig: no grid");
    grid->validate();
    if (!(dt > 0.0) || dt > 0.5)
        throw std::invalid_argument("MacroSolverConfig: dt must lie in (0, 0.5] for rate-fit accuracy");
    if (!(t_end > 0.0)) throw std::invalid_argument("MacroSolverConfig: t_end must be > 0");
    if (mode_k < 0) throw std::invalid_argument("MacroSolverConfig: mode_k must be >= 0");
    if (d < 1) throw std::invalid_argument("MacroSolverConfig: d must be >= 1");
    if (frame == Frame::Original) {
        const double horizon = std::pow(grid->r_max() / 8.0, 2);
        if (t_end > horizon)
            throw std::invalid_argument(
                "MacroSolverConfig: original-frame runs need t_end <= (r_max/8)^2 to keep truncation "
                "error below the rate-fit floor");
    }
    if (spec.kind == PotentialKind::V1 && grid->nodes.front() == 0.0)
        throw std::invalid_argument("MacroSolverConfig: V1 runs need a grid with r_0 > 0");
}

double frame_potential(const MacroSolverConfig& cfg, double t, double r) {
    if (cfg.frame == Frame::Original) return eval_potential(cfg.spec, r);
    const double g = cfg.spec.gamma;
    switch (cfg.spec.kind) {
        case PotentialKind::NoPotential: return 0.5 * r * r;
        case PotentialKind::V1:
            // time independent: gamma*log r + r^2/2
            return g * std::log(r) + 0.5 * r * r;
        case PotentialKind::V2:
            // tau-dependent: (gamma/2) log(1 + e^{2 tau} r^2) + r^2/2
            return 0.5 * g * std::log1p(std::exp(2.0 * t) * r * r) + 0.5 * r * r;
    }
    throw std::logic_error("frame_potential: bad kind");
}

namespace {

// Per-face transmissibilities of the flux form at a frozen time. The face
// coefficient is the harmonic-integral mean of e^{-W} across the cell gap,
// which keeps every e^{-W}-shaped profile an exact discrete steady state.
struct Operator {
    std::vector<double> eW;     // e^{W} at nodes
    std::vector<double> coef;   // A_f * ebar_f / dr_f per interior face
};

Operator assemble(const MacroSolverConfig& cfg, double t) {
    const RadialGrid& g = *cfg.grid;
    const std::size_t n = g.size();
    Operator op;
    op.eW.resize(n);
    // evaluate W relative to its value at a reference radius to avoid overflow
    // of e^W for steep self-similar potentials; fluxes only see differences.
    const double Wref = frame_potential(cfg, t, g.nodes[n / 2]);
    for (std::size_t i = 0; i < n; ++i) op.eW[i] = std::exp(frame_potential(cfg, t, g.nodes[i]) - Wref);

    static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                 0.5384693101056831, 0.9061798459386640};
    static const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                 0.4786286704993665, 0.2369268850561891};
    const double sd = sphere_surface(cfg.d);
    op.coef.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = g.nodes[i], b = g.nodes[i + 1];
        double I = 0.0;  // integral of e^{W - Wref} over [a,b]
        for (int q = 0; q < 5; ++q) {
            const double r = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
            I += 0.5 * (b - a) * gw[q] * std::exp(frame_potential(cfg, t, r) - Wref);
        }
        const double ebar = (b - a) / I;                 // harmonic-integral mean of e^{-W}
        const double area = sd * std::pow(g.faces[i + 1], cfg.d - 1);
        op.coef[i] = area * ebar / (b - a);
    }
    return op;
}

// action of the spatial operator on u
void apply(const Operator& op, const MacroSolverConfig& cfg, const std::vector<double>& u,
           std::vector<double>& out) {
    const RadialGrid& g = *cfg.grid;
    const std::size_t n = g.size();
    out.assign(n, 0.0);
    for (std::size_t f = 0; f + 1 < n + 0; ++f) {
        if (f >= n - 1) break;
        const double flux = op.coef[f] * (op.eW[f + 1] * u[f + 1] - op.eW[f] * u[f]);
        out[f] += flux / g.weights[f];
        out[f + 1] -= flux / g.weights[f + 1];
    }
    if (cfg.mode_k > 0) {
        const double kk = double(cfg.mode_k) * (cfg.mode_k + cfg.d - 2);
        for (std::size_t i = 0; i < n; ++i) out[i] -= kk / (g.nodes[i] * g.nodes[i]) * u[i];
    }
}

// Thomas solve of (I - dt*L) x = rhs; L is the tridiagonal flux operator.
std::vector<double> implicit_solve(const Operator& op, const MacroSolverConfig& cfg, double dt,
                                   const std::vector<double>& rhs) {
    const RadialGrid& g = *cfg.grid;
    const std::size_t n = g.size();
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0);  // sub/diag/super
    for (std::size_t i = 0; i < n; ++i) b[i] = 1.0;
    for (std::size_t f = 0; f + 1 < n; ++f) {
        const double cl = dt * op.coef[f] / g.weights[f];
        const double cr = dt * op.coef[f] / g.weights[f + 1];
        b[f] += cl * op.eW[f];
        c[f] -= cl * op.eW[f + 1];
        b[f + 1] += cr * op.eW[f + 1];
        a[f + 1] -= cr * op.eW[f];
    }
    if (cfg.mode_k > 0) {
        const double kk = double(cfg.mode_k) * (cfg.mode_k + cfg.d - 2);
        for (std::size_t i = 0; i < n; ++i) b[i] += dt * kk / (g.nodes[i] * g.nodes[i]);
    }
    std::vector<double> cp(n), dp(n), x(n);
    if (b[0] == 0.0) throw std::runtime_error("step_macro: singular tridiagonal system (pivot 0)");
    cp[0] = c[0] / b[0];
    dp[0] = rhs[0] / b[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double denom = b[i] - a[i] * cp[i - 1];
        if (denom == 0.0)
            throw std::runtime_error("step_macro: singular tridiagonal system at row " + std::to_string(i));
        cp[i] = c[i] / denom;
        dp[i] = (rhs[i] - a[i] * dp[i - 1]) / denom;
    }
    x[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
}

void check_finite(const std::vector<double>& u, double t) {
    for (double v : u)
        if (!std::isfinite(v))
            throw std::runtime_error("step_macro: NaN/Inf detected at t = " + std::to_string(t));
}

}  // namespace

RadialField step_macro(const RadialField& state, const MacroSolverConfig& cfg, double t, double dt) {
    if (state.grid != cfg.grid) throw std::invalid_argument("step_macro: field/config grid mismatch");
    const Operator op = assemble(cfg, t + dt);
    RadialField next(*cfg.grid);
    if (cfg.crank_nicolson) {
        std::vector<double> lu;
        apply(op, cfg, state.values, lu);
        std::vector<double> rhs(state.values);
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += 0.5 * dt * lu[i];
        next.values = implicit_solve(op, cfg, 0.5 * dt, rhs);
    } else {
        next.values = implicit_solve(op, cfg, dt, state.values);
    }
    check_finite(next.values, t + dt);
    return next;
}

MacroTrajectory run_macro(const RadialField& u0, const MacroSolverConfig& cfg) {
    cfg.validate();
    u0.require_finite("run_macro initial datum");
    MacroTrajectory traj;
    traj.frame = cfg.frame;
    traj.cfg = cfg;

    // geometric sample schedule
    std::vector<double> samples;
    const double ratio = std::pow(cfg.t_end / cfg.t_first_sample, 1.0 / double(cfg.n_samples - 1));
    for (std::size_t k = 0; k < cfg.n_samples; ++k)
        samples.push_back(cfg.t_first_sample * std::pow(ratio, double(k)));
    samples.back() = cfg.t_end;

    const ProfileParams* prof = cfg.profile ? &*cfg.profile : nullptr;
    auto record = [&](double t, const RadialField& u) {
        traj.times.push_back(t);
        traj.snapshots.push_back(u);
        if (t <= 0.0) return;  // series carry positive times only (log-log fits)
        auto& series = traj.series;
        auto put = [&](const std::string& key, double v) {
            auto it = series.find(key);
            if (it == series.end()) {
                DecaySeries s;
                s.label = key;
                it = series.emplace(key, std::move(s)).first;
            }
            it->second.push(t, v);
        };
        put("l2", weighted_norm_sq(u, [](double) { return 1.0; }));
        put("mass", weighted_integral(u, [](double) { return 1.0; }));
        const PotentialSpec& sp = cfg.spec;
        put("l2_weighted_eV", weighted_norm_sq(u, [&](double r) { return std::exp(eval_potential(sp, r)); }));
        const double km = cfg.k_moment;
        put("moment_k", weighted_integral(u, [km](double r) { return std::pow(r, km); }));
        if (prof) {
            double chi = 0.0;
            const RadialGrid& g = *cfg.grid;
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (g.nodes[i] == 0.0 && prof->sigma == 0.0) continue;  // excluded origin node
                const double us = (cfg.frame == Frame::Original) ? u_star(*prof, t, g.nodes[i])
                                                                 : v_star(*prof, t, g.nodes[i]);
                if (!(us > 0.0)) throw std::domain_error("chi_square: profile not positive at node");
                const double dlt = u.values[i] - us;
                chi += g.weights[i] * dlt * dlt / us;
            }
            put("chi_square_vs_profile", chi);
        }
    };

    RadialField u = u0;
    record(0.0, u);
    double t = 0.0;
    for (double ts : samples) {
        const double gap = ts - t;
        if (gap <= 0.0) continue;
        const std::size_t nsub = std::max<std::size_t>(1, std::size_t(std::ceil(gap / cfg.dt)));
        const double dt = gap / double(nsub);
        for (std::size_t s = 0; s < nsub; ++s) {
            u = step_macro(u, cfg, t, dt);
            t += dt;
        }
        t = ts;  // kill accumulated roundoff in the clock
        record(t, u);
    }
    return traj;
}

SupersolutionReport supersolution_check(const MacroTrajectory& traj, const ProfileParams& params,
                                        double slack) {
    if (traj.snapshots.empty()) throw std::invalid_argument("supersolution_check: empty trajectory");
    const RadialGrid& g = *traj.cfg.grid;
    auto bound = [&](double t, double r) {
        return (traj.frame == Frame::Original) ? u_star(params, t, r) : v_star(params, t, r);
    };
    // hypothesis: the initial snapshot sits below the bound
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.nodes[i] == 0.0 && params.sigma == 0.0) continue;
        if (traj.snapshots.front().values[i] > bound(traj.times.front(), g.nodes[i]) + slack)
            throw std::invalid_argument(
                "supersolution_check: initial datum violates the comparison hypothesis");
    }
    SupersolutionReport rep;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g.nodes[i] == 0.0 && params.sigma == 0.0) continue;
            const double m = bound(traj.times[s], g.nodes[i]) - traj.snapshots[s].values[i];
            if (m < rep.worst_margin) {
                rep.worst_margin = m;
                rep.worst_time = traj.times[s];
                rep.worst_node = i;
            }
        }
    }
    rep.pass = rep.worst_margin >= -slack;
    return rep;
}

double moment_bound_closed(double k, int d, double gamma, double Mk0, double M0, double t) {
    if (!(k >= 2.0) || k < 0.5 * gamma)
        throw std::domain_error("moment_bound_closed: requires k >= max(2, gamma/2)");
    if (!(double(d) + k - 2.0 - gamma > 0.0))
        throw std::domain_error("moment_bound_closed: requires d + k - 2 - gamma > 0");
    if (!(M0 > 0.0) || Mk0 < 0.0 || t < 0.0)
        throw std::domain_error("moment_bound_closed: bad arguments");
    const double base = std::pow(Mk0, 2.0 / k) + 2.0 * (d + k - 2.0 - gamma) * std::pow(M0, 2.0 / k) * t;
    return std::pow(base, 0.5 * k);
}

DecaySeries chi_square_distance(const MacroTrajectory& traj, const ProfileParams& params) {
    const RadialGrid& g = *traj.cfg.grid;
    DecaySeries out;
    out.label = "chi_square_vs_profile";
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        const double t = traj.times[s];
        if (t <= 0.0) continue;
        double chi = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g.nodes[i] == 0.0 && params.sigma == 0.0) continue;
            const double us = (traj.frame == Frame::Original) ? u_star(params, t, g.nodes[i])
                                                              : v_star(params, t, g.nodes[i]);
            if (!(us > 0.0)) throw std::domain_error("chi_square_distance: profile not positive");
            const double dlt = traj.snapshots[s].values[i] - us;
            chi += g.weights[i] * dlt * dlt / us;
        }
        out.push(t, chi);
    }
    return out;
}

}  // namespace logfp
