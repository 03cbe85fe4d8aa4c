#include "grids.hpp"

#include <cmath>
#include <stdexcept>

namespace logfp {

double sphere_surface(int d) {
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

double ball_volume(int d, double r) {
    return sphere_surface(d) / d * std::pow(r, d);
}

void RadialGrid::validate() const {
    if (d < 1) throw std::invalid_argument("RadialGrid: dimension must be >= 1");
    if (nodes.size() < 2 || nodes.size() != weights.size() || faces.size() != nodes.size() + 1)
        throw std::invalid_argument("RadialGrid: inconsistent sizes");
    if (nodes.front() < 0.0) throw std::invalid_argument("RadialGrid: nodes must be >= 0");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1])) throw std::invalid_argument("RadialGrid: nodes not increasing");
    for (double w : weights)
        if (!(w > 0.0)) throw std::invalid_argument("RadialGrid: nonpositive quadrature weight");
}

static std::vector<double> cell_volumes(int d, const std::vector<double>& faces) {
    const double sd = sphere_surface(d);
    std::vector<double> w(faces.size() - 1);
    for (std::size_t i = 0; i + 1 < faces.size(); ++i)
        w[i] = sd / d * (std::pow(faces[i + 1], d) - std::pow(faces[i], d));
    return w;
}

RadialGrid RadialGrid::blended(int d, double r_max, std::size_t n_log, std::size_t n_uniform,
                               double r_inner, double blend, bool include_origin) {
    if (r_max <= blend) blend = 0.5 * r_max;
    RadialGrid g;
    g.d = d;
    // face ladder: geometric core below `blend`, uniform bulk above
    g.faces.push_back(0.0);
    const double ratio = std::pow(blend / r_inner, 1.0 / double(n_log));
    double r = r_inner;
    for (std::size_t i = 0; i <= n_log; ++i, r *= ratio) g.faces.push_back(std::min(r, blend));
    const double h = (r_max - blend) / double(n_uniform);
    for (std::size_t i = 1; i <= n_uniform; ++i) g.faces.push_back(blend + h * double(i));
    g.faces.back() = r_max;

    // nodes at the r^{d-1}-measure centroid of each cell, so that linear
    // integrands are quadrature-exact; the optional origin node is special
    g.nodes.resize(g.faces.size() - 1);
    for (std::size_t i = 0; i + 1 < g.faces.size(); ++i) {
        const double a = g.faces[i], b = g.faces[i + 1];
        g.nodes[i] = double(d) / (d + 1.0) * (std::pow(b, d + 1) - std::pow(a, d + 1)) /
                     (std::pow(b, d) - std::pow(a, d));
    }
    if (include_origin) g.nodes[0] = 0.0;
    g.weights = cell_volumes(d, g.faces);
    g.validate();
    return g;
}

RadialGrid RadialGrid::gauss_panels(int d, double r_min, double r_max,
                                    std::size_t n_geo, std::size_t n_uni, double blend, int npts) {
    // Gauss-Legendre abscissae/weights on [-1,1] for npts in {4,8}
    static const double x4[] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
    static const double w4[] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
    static const double x8[] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                                0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
    static const double w8[] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                                0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    const double* gx = (npts == 4) ? x4 : x8;
    const double* gw = (npts == 4) ? w4 : w8;
    if (npts != 4) npts = 8;

    std::vector<double> panel;
    panel.push_back(r_min);
    const double ratio = std::pow(blend / r_min, 1.0 / double(n_geo));
    double r = r_min;
    for (std::size_t i = 0; i < n_geo; ++i) { r *= ratio; panel.push_back(r); }
    const double h = (r_max - blend) / double(n_uni);
    for (std::size_t i = 1; i <= n_uni; ++i) panel.push_back(blend + h * double(i));

    RadialGrid g;
    g.d = d;
    const double sd = sphere_surface(d);
    for (std::size_t p = 0; p + 1 < panel.size(); ++p) {
        const double a = panel[p], b = panel[p + 1];
        for (int q = 0; q < npts; ++q) {
            const double rq = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
            g.nodes.push_back(rq);
            g.weights.push_back(0.5 * (b - a) * gw[q] * sd * std::pow(rq, d - 1));
        }
    }
    // faces are panel edges refined per-node midpoints; only used for bookkeeping
    g.faces.resize(g.nodes.size() + 1);
    g.faces[0] = 0.0;
    for (std::size_t i = 0; i + 1 < g.nodes.size(); ++i)
        g.faces[i + 1] = 0.5 * (g.nodes[i] + g.nodes[i + 1]);
    g.faces.back() = r_max;
    // ball-volume exactness only holds down to r_min on Gauss panels; fold the
    // missing inner ball into the first weight so that sum(w) = |B_rmax|.
    g.weights.front() += ball_volume(d, r_min);
    g.validate();
    return g;
}

RadialField::RadialField(const RadialGrid& g, const std::function<double(double)>& f)
    : grid(&g), values(g.size()) {
    for (std::size_t i = 0; i < g.size(); ++i) values[i] = f(g.nodes[i]);
}

void RadialField::require_finite(const char* what) const {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            throw std::domain_error(std::string(what) + ": non-finite value at node " + std::to_string(i));
}

template <class Acc>
static double radial_accumulate(const RadialField& field, const std::function<double(double)>& weight,
                                Acc acc) {
    if (!field.grid) throw std::invalid_argument("RadialField: no grid attached");
    const RadialGrid& g = *field.grid;
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double wr = weight(g.nodes[i]);
        if (!std::isfinite(wr)) {
            if (i == 0 && g.nodes[0] == 0.0) continue;  // origin carries zero weight for singular integrands
            throw std::domain_error("weighted quadrature: non-finite weight at node " + std::to_string(i) +
                                    " (r = " + std::to_string(g.nodes[i]) + ")");
        }
        s += g.weights[i] * wr * acc(field.values[i]);
    }
    return s;
}

double weighted_norm_sq(const RadialField& field, const std::function<double(double)>& weight) {
    return radial_accumulate(field, weight, [](double v) { return v * v; });
}

double weighted_integral(const RadialField& field, const std::function<double(double)>& weight) {
    return radial_accumulate(field, weight, [](double v) { return v; });
}

PhaseGrid PhaseGrid::make(std::size_t nx, std::size_t nv, double X_max, double V_max) {
    if (nx < 8 || nv < 8) throw std::invalid_argument("PhaseGrid: node counts must be >= 8");
    if (V_max < 6.0) throw std::invalid_argument("PhaseGrid: V_max must be >= 6 to cover the Gaussian tail");
    PhaseGrid g;
    g.X_max = X_max;
    g.V_max = V_max;
    g.dx = 2.0 * X_max / double(nx - 1);
    g.dv = 2.0 * V_max / double(nv - 1);
    g.x_nodes.resize(nx);
    g.v_nodes.resize(nv);
    for (std::size_t i = 0; i < nx; ++i) g.x_nodes[i] = -X_max + g.dx * double(i);
    for (std::size_t j = 0; j < nv; ++j) g.v_nodes[j] = -V_max + g.dv * double(j);
    // symmetrize exactly so that odd v-moments of even functions vanish
    for (std::size_t j = 0; j < nv; ++j) g.v_nodes[j] = 0.5 * (g.v_nodes[j] - g.v_nodes[nv - 1 - j]);
    for (std::size_t i = 0; i < nx; ++i) g.x_nodes[i] = 0.5 * (g.x_nodes[i] - g.x_nodes[nx - 1 - i]);
    return g;
}

void PhaseField::require_finite(const char* what) const {
    for (double v : values)
        if (!std::isfinite(v)) throw std::domain_error(std::string(what) + ": non-finite phase-space value");
}

double phase_integral(const PhaseField& field, const std::function<double(double, double)>& weight) {
    if (!field.grid) throw std::invalid_argument("PhaseField: no grid attached");
    const PhaseGrid& g = *field.grid;
    const std::size_t nx = g.nx(), nv = g.nv();
    double s = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < nv; ++j) {
            const double w = weight(g.x_nodes[i], g.v_nodes[j]);
            if (!std::isfinite(w)) throw std::domain_error("phase_integral: non-finite weight on grid");
            row += trapezoid_factor(j, nv) * w * field.at(i, j);
        }
        s += trapezoid_factor(i, nx) * row;
    }
    return s * g.dx * g.dv;
}

}  // namespace logfp
