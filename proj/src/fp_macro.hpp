#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grids.hpp"
#include "potentials.hpp"
#include "rates.hpp"

namespace logfp {

enum class Frame { Original, SelfSimilar };

/// Radial solver configuration for du/dt = div(e^{-W} grad(e^{W} u)) with
/// W = V (original frame) or W = Phi (self-similar frame), plus the
/// centrifugal term -k(k+d-2)/r^2 for a spherical-harmonic sector k > 0.
struct MacroSolverConfig {
    PotentialSpec spec;
    int d = 3;
    const RadialGrid* grid = nullptr;
    double dt = 0.1;            // max step, must be <= 0.5
    double t_end = 10.0;
    Frame frame = Frame::Original;
    int mode_k = 0;
    bool crank_nicolson = false;

    // sampling: geometric schedule t_first * ratio^k up to t_end
    double t_first_sample = 0.1;
    std::size_t n_samples = 60;

    std::optional<ProfileParams> profile;  // enables chi_square_vs_profile
    double k_moment = 2.0;                 // exponent of the tracked moment series

    void validate() const;
};

struct MacroTrajectory {
    std::vector<double> times;            // sample times (first entry may be 0)
    std::vector<RadialField> snapshots;   // one per sample time
    std::map<std::string, DecaySeries> series;  // keys: l2, l2_weighted_eV, mass, moment_k, chi_square_vs_profile
    Frame frame = Frame::Original;
    MacroSolverConfig cfg;
};

/// One implicit step of the conservative finite-volume discretization,
/// from time t to t + dt (the drift potential is frozen at t + dt).
RadialField step_macro(const RadialField& state, const MacroSolverConfig& cfg, double t, double dt);

/// Evolve u0 and sample the requested series on a geometric time schedule.
MacroTrajectory run_macro(const RadialField& u0, const MacroSolverConfig& cfg);

struct SupersolutionReport {
    bool pass = false;
    double worst_margin = 0.0;   // min over nodes/snapshots of bound - u (>= -slack passes)
    double worst_time = 0.0;
    std::size_t worst_node = 0;
};

/// Pointwise comparison of every snapshot against the decaying profile bound;
/// requires the initial snapshot to satisfy the bound (precondition error
/// otherwise). `slack` absorbs discretization and roundoff.
SupersolutionReport supersolution_check(const MacroTrajectory& traj, const ProfileParams& params,
                                        double slack = 1e-8);

/// Closed moment bound (M_k(0)^{2/k} + 2(d+k-2-gamma) M_0^{2/k} t)^{k/2}.
double moment_bound_closed(double k, int d, double gamma, double Mk0, double M0, double t);

/// Series of int (u - u_*)^2 / u_* over the trajectory (frame-aware; the
/// quantity is invariant under the self-similar change of variables).
DecaySeries chi_square_distance(const MacroTrajectory& traj, const ProfileParams& params);

/// Time-dependent drift potential of the active frame at radius r.
double frame_potential(const MacroSolverConfig& cfg, double t, double r);

}  // namespace logfp
