#pragma once

#include "grids.hpp"

namespace logfp {

enum class PotentialKind { NoPotential, V1, V2 };

/// Confinement potential: V1 = gamma*log|x|, V2 = gamma*log<x>, or none.
struct PotentialSpec {
    PotentialKind kind = PotentialKind::NoPotential;
    double gamma = 0.0;

    static PotentialSpec none() { return {PotentialKind::NoPotential, 0.0}; }
    static PotentialSpec v1(double gamma) { return {PotentialKind::V1, gamma}; }
    static PotentialSpec v2(double gamma) { return {PotentialKind::V2, gamma}; }
};

double eval_potential(const PotentialSpec& spec, double r);
double eval_potential_derivative(const PotentialSpec& spec, double r);  // dV/dr

/// Rescaled potential Phi_{gamma,sigma}(xi) = |xi|^2/2 + (gamma/2) log(sigma + |xi|^2),
/// the drift of the flow in self-similar variables (sigma = 0 for V1, 1 for V2).
struct SelfSimilarPotential {
    double gamma = 0.0;
    double sigma = 0.0;

    double phi(double r) const;
    double dphi(double r) const;  // radial derivative
};

/// Parameters of the explicit decaying profile
///   c_star (1+2t)^{-(d-gamma)/2} (sigma+r^2)^{-gamma/2} exp(-r^2/(2(1+2t))).
struct ProfileParams {
    double c_star = 1.0;
    double gamma = 0.0;
    int d = 3;
    double sigma = 0.0;  // 0 or 1
};

double u_star(const ProfileParams& p, double t, double r);

/// Profile in self-similar variables at rescaled time tau (sigma = 0 gives the
/// time-independent equilibrium, sigma = 1 the quasi-equilibrium).
double v_star(const ProfileParams& p, double tau, double xi);

/// c_star such that the t = 0 profile carries the given mass on the grid.
double match_c_star(const RadialGrid& grid, double gamma, double sigma, double mass);

/// max_{r>0} r^{-gamma} exp(-r^2/(4t)) = (e/(2|gamma| t))^{gamma/2}, the sup
/// being attained for gamma < 0 (the formula is evaluated for any gamma != 0).
double unif_max_bound(double gamma, double t);

/// Best constant in the rescaled weighted Poincare inequality at sigma = 0:
/// 4(1-gamma) in dimension 1, min{4, 4(d-gamma), d-1} for d >= 2.
/// gamma = 0 is accepted by continuity.
double lambda_star(int d, double gamma);

/// zeta_p = (d/2)(1-1/p) + lambda_star/(2p), the L^p intermediate-asymptotics
/// exponent; zeta_1 = lambda_star/2.
double zeta_p(int d, double gamma, double p);

/// c = (4/d) min{1, 1-2 gamma/(d-2)} / c_nash * (norm2/norm1)^{4/d}, the decay
/// rate constant of the unweighted L^2 estimate. Requires gamma < (d-2)/2.
double decay_rate_constant(int d, double gamma, double c_nash, double norm1, double norm2);

/// Schrodinger potential psi = |grad Phi|^2/4 - (Laplacian Phi)/2 for
/// Phi_{gamma,sigma} in dimension d, in closed form with X = r^2 + sigma:
///   4 psi = X - (2d + sigma - 2 gamma) - gamma(2d + 2 sigma - gamma - 4)/X
///           - gamma sigma (gamma + 4)/X^2.
double schrodinger_psi(int d, double gamma, double sigma, double r);

}  // namespace logfp
