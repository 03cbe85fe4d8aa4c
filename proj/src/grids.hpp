#pragma once

#include <functional>
#include <string>
#include <vector>

namespace logfp {

/// Radial grid on [0, r_max] for a rotation-invariant problem in dimension d.
/// Nodes are strictly increasing; node i owns the shell between the midpoint
/// faces, so the quadrature weights sum exactly to the volume of the ball of
/// radius r_max (surface factor |S^{d-1}| folded in).
struct RadialGrid {
    int d = 3;
    std::vector<double> nodes;    // r_0 < r_1 < ... < r_{N-1}, r_0 >= 0
    std::vector<double> weights;  // w_i ~ int_cell r^{d-1} dr * |S^{d-1}|
    std::vector<double> faces;    // N+1 cell boundaries, faces[0] = 0, faces[N] = r_max

    std::size_t size() const { return nodes.size(); }
    double r_max() const { return faces.back(); }

    /// Log-spaced nodes on [r_inner, blend] blended into uniform nodes on
    /// [blend, r_max]. With include_origin the first node sits at r = 0 and
    /// singular weights there are handled by the zero-weight exclusion rule.
    static RadialGrid blended(int d, double r_max, std::size_t n_log, std::size_t n_uniform,
                              double r_inner = 1e-4, double blend = 1.0,
                              bool include_origin = false);

    /// Composite Gauss-Legendre panels (npts per panel), geometric below `blend`
    /// and uniform above. High-order quadrature for the inequality estimators.
    static RadialGrid gauss_panels(int d, double r_min, double r_max,
                                   std::size_t n_geo_panels, std::size_t n_uni_panels,
                                   double blend = 1.0, int npts = 8);

    void validate() const;  // throws std::invalid_argument on a bad grid
};

/// Values attached to the nodes of a RadialGrid.
struct RadialField {
    const RadialGrid* grid = nullptr;
    std::vector<double> values;

    RadialField() = default;
    explicit RadialField(const RadialGrid& g) : grid(&g), values(g.size(), 0.0) {}
    RadialField(const RadialGrid& g, const std::function<double(double)>& f);

    std::size_t size() const { return values.size(); }
    void require_finite(const char* what) const;
};

/// sum_i w_i * weight(r_i) * values_i^2.
/// A node where the weight is non-finite is excluded when it is the origin
/// node (r = 0, zero quadrature weight for diverging weights); anywhere else
/// it is a domain error naming the node.
double weighted_norm_sq(const RadialField& field, const std::function<double(double)>& weight);

/// sum_i w_i * weight(r_i) * values_i  (same exclusion rule).
double weighted_integral(const RadialField& field, const std::function<double(double)>& weight);

double ball_volume(int d, double r);      // |B_r| in R^d
double sphere_surface(int d);             // |S^{d-1}|

/// Uniform tensor grid on [-X_max, X_max] x [-V_max, V_max].
struct PhaseGrid {
    std::vector<double> x_nodes;
    std::vector<double> v_nodes;
    double dx = 0, dv = 0;
    double X_max = 0, V_max = 0;

    static PhaseGrid make(std::size_t nx, std::size_t nv, double X_max, double V_max);
    std::size_t nx() const { return x_nodes.size(); }
    std::size_t nv() const { return v_nodes.size(); }
};

/// f(x_i, v_j) stored row-major: values[i*nv + j].
struct PhaseField {
    const PhaseGrid* grid = nullptr;
    std::vector<double> values;

    PhaseField() = default;
    explicit PhaseField(const PhaseGrid& g) : grid(&g), values(g.nx() * g.nv(), 0.0) {}

    double& at(std::size_t i, std::size_t j) { return values[i * grid->nv() + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * grid->nv() + j]; }
    void require_finite(const char* what) const;
};

/// Trapezoid-rule double integral of weight(x,v) * f(x,v).
double phase_integral(const PhaseField& field, const std::function<double(double, double)>& weight);

/// Trapezoid weight of node i in an n-point uniform 1D grid (1/2 at the ends).
inline double trapezoid_factor(std::size_t i, std::size_t n) {
    return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

}  // namespace logfp
