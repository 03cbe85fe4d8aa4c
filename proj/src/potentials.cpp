#include "potentials.hpp"

#include <cmath>
#include <stdexcept>

namespace logfp {

double eval_potential(const PotentialSpec& spec, double r) {
    if (r < 0.0) throw std::domain_error("eval_potential: r must be >= 0");
    switch (spec.kind) {
        case PotentialKind::NoPotential: return 0.0;
        case PotentialKind::V1:
            if (r == 0.0) throw std::domain_error("eval_potential: V1 is singular at r = 0");
            return spec.gamma * std::log(r);
        case PotentialKind::V2:
            return 0.5 * spec.gamma * std::log1p(r * r);
    }
    throw std::logic_error("eval_potential: bad kind");
}

double eval_potential_derivative(const PotentialSpec& spec, double r) {
    switch (spec.kind) {
        case PotentialKind::NoPotential: return 0.0;
        case PotentialKind::V1:
            if (r == 0.0) throw std::domain_error("eval_potential_derivative: V1 singular at r = 0");
            return spec.gamma / r;
        case PotentialKind::V2: return spec.gamma * r / (1.0 + r * r);
    }
    throw std::logic_error("eval_potential_derivative: bad kind");
}

double SelfSimilarPotential::phi(double r) const {
    if (sigma == 0.0 && r == 0.0 && gamma != 0.0)
        throw std::domain_error("SelfSimilarPotential: singular at xi = 0 for sigma = 0");
    return 0.5 * r * r + 0.5 * gamma * std::log(sigma + r * r);
}

double SelfSimilarPotential::dphi(double r) const {
    return r + gamma * r / (sigma + r * r);
}

double u_star(const ProfileParams& p, double t, double r) {
    if (p.sigma == 0.0 && r == 0.0 && p.gamma > 0.0)
        throw std::domain_error("u_star: profile singular at r = 0 for sigma = 0");
    const double s = 1.0 + 2.0 * t;
    return p.c_star * std::pow(s, -0.5 * (p.d - p.gamma)) *
           std::pow(p.sigma + r * r, -0.5 * p.gamma) * std::exp(-r * r / (2.0 * s));
}

double v_star(const ProfileParams& p, double tau, double xi) {
    const double s0 = (p.sigma == 0.0) ? 0.0 : std::exp(-2.0 * tau);
    if (s0 == 0.0 && xi == 0.0 && p.gamma > 0.0)
        throw std::domain_error("v_star: singular at xi = 0 for sigma = 0");
    return p.c_star * std::pow(s0 + xi * xi, -0.5 * p.gamma) * std::exp(-0.5 * xi * xi);
}

double match_c_star(const RadialGrid& grid, double gamma, double sigma, double mass) {
    RadialField unit(grid, [&](double r) {
        if (sigma == 0.0 && r == 0.0) return 0.0;  // origin excluded, zero weight anyway
        return std::pow(sigma + r * r, -0.5 * gamma) * std::exp(-0.5 * r * r);
    });
    const double m1 = weighted_integral(unit, [](double) { return 1.0; });
    if (!(m1 > 0.0)) throw std::runtime_error("match_c_star: profile has nonpositive mass on grid");
    return mass / m1;
}

double unif_max_bound(double gamma, double t) {
    if (gamma == 0.0) throw std::domain_error("unif_max_bound: gamma = 0 is degenerate (max is 1)");
    if (!(t > 0.0)) throw std::domain_error("unif_max_bound: t must be > 0");
    return std::pow(M_E / (2.0 * std::abs(gamma) * t), 0.5 * gamma);
}

double lambda_star(int d, double gamma) {
    if (d < 1) throw std::domain_error("lambda_star: d must be >= 1");
    if (gamma < 0.0 || gamma >= double(d))
        throw std::domain_error("lambda_star: gamma must lie in [0, d)");
    if (d == 1) return 4.0 * (1.0 - gamma);
    return std::min({4.0, 4.0 * (double(d) - gamma), double(d) - 1.0});
}

double zeta_p(int d, double gamma, double p) {
    if (!(p >= 1.0)) throw std::domain_error("zeta_p: p must be >= 1");
    return 0.5 * d * (1.0 - 1.0 / p) + lambda_star(d, gamma) / (2.0 * p);
}

double decay_rate_constant(int d, double gamma, double c_nash, double norm1, double norm2) {
    if (d < 3) throw std::domain_error("decay_rate_constant: d must be >= 3");
    if (!(gamma < 0.5 * (d - 2)))
        throw std::domain_error("decay_rate_constant: requires gamma < (d-2)/2");
    if (!(c_nash > 0.0) || !(norm1 > 0.0) || !(norm2 > 0.0))
        throw std::domain_error("decay_rate_constant: constants and norms must be positive");
    const double m = std::min(1.0, 1.0 - 2.0 * gamma / (double(d) - 2.0));
    return 4.0 / d * m / c_nash * std::pow(norm2 / norm1, 4.0 / d);
}

double schrodinger_psi(int d, double gamma, double sigma, double r) {
    const double X = r * r + sigma;
    if (!(X > 0.0)) throw std::domain_error("schrodinger_psi: r^2 + sigma must be positive");
    // psi = |grad Phi|^2/4 - (Laplacian Phi)/2 for Phi = r^2/2 + (gamma/2) log X;
    // the X^-2 coefficient carries a factor sigma (it vanishes for sigma = 0).
    const double c1 = gamma * (2.0 * d + 2.0 * sigma - gamma - 4.0);
    const double c2 = gamma * sigma * (gamma + 4.0);
    return 0.25 * (X - (2.0 * d + sigma - 2.0 * gamma) - c1 / X - c2 / (X * X));
}

}  // namespace logfp
