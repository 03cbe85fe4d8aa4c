#pragma once

#include <vector>

#include "grids.hpp"

namespace logfp {

/// Weighted Poincare eigenproblem for the measure r^{d-1}(sigma+r^2)^{-gamma/2} e^{-r^2/2} dr
/// in the spherical-harmonic sector mode_k (0 = radial).
struct SpectralProblem {
    int d = 3;
    double gamma = 0.0;
    double sigma = 0.0;
    int mode_k = 0;
    const RadialGrid* grid = nullptr;  // must have r_0 > 0
    int count = 3;                     // lowest nonzero eigenvalues requested
};

struct SpectralResult {
    std::vector<double> eigenvalues;              // sorted, kernel mode deflated
    std::vector<double> eigenfunction_norm_tails; // measure fraction beyond r_max/2
    std::vector<bool> continuum_adjacent;         // within 2% of the threshold 4
    bool tail_warning = false;                    // any tail diagnostic > 1e-4
    SpectralProblem problem;
};

/// Grid sized for eigenvalue work (log-spaced core, uniform Gaussian bulk).
RadialGrid spectral_default_grid(int d, double r_max = 10.0, std::size_t n = 1600,
                                 double r_inner = 2e-3);

/// Lowest nonzero eigenvalues of the weighted form
///   int (|g'|^2 + k(k+d-2) g^2/r^2) dmu  /  int g^2 dmu,
/// i.e. of the Schrodinger operator -Lap + psi after the ground-state
/// transform. Symmetric tridiagonal solve; Dirichlet at r_max.
SpectralResult poincare_gap(const SpectralProblem& problem);

/// Spectral gap per sigma (same grid and sector for every entry).
std::vector<double> sigma_continuity_scan(int d, double gamma, const std::vector<double>& sigmas,
                                          int mode_k = 0, const RadialGrid* grid = nullptr);

/// Smallest eigenvalue lambda_1^R of the ball problem
///   int_{B_R} |grad w|^2 |x|^{-gamma}  >=  lambda_1^R int_{B_R} w^2 |x|^{-gamma}
/// over radial w with zero |x|^{k-gamma}-weighted mean (constraint deflated).
double ball_poincare_constant(double R, int d, double gamma, double k_weight,
                              std::size_t n_nodes = 480);

}  // namespace logfp
