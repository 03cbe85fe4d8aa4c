#include "spectral.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace logfp {

RadialGrid spectral_default_grid(int d, double r_max, std::size_t n, double r_inner) {
    const std::size_t n_log = n / 3;
    return RadialGrid::blended(d, r_max, n_log, n - n_log, r_inner, 1.0, false);
}

namespace {

// 5-point Gauss-Legendre cell integral of fn over [a, b]
template <class Fn>
double cell_integral(Fn&& fn, double a, double b) {
    static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                 0.5384693101056831, 0.9061798459386640};
    static const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                 0.4786286704993665, 0.2369268850561891};
    double s = 0.0;
    for (int q = 0; q < 5; ++q)
        s += 0.5 * (b - a) * gw[q] * fn(0.5 * (a + b) + 0.5 * (b - a) * gx[q]);
    return s;
}

struct TridiagForm {
    Eigen::VectorXd diag, sub;   // symmetrized tridiagonal
    std::vector<double> wnode;   // cell measures (for tail diagnostics)
    std::size_t n = 0;
};

TridiagForm assemble_poincare(const SpectralProblem& p) {
    const RadialGrid& g = *p.grid;
    if (g.nodes.front() <= 0.0)
        throw std::invalid_argument("poincare_gap: grid must start at r > 0");
    const std::size_t n_full = g.size();
    auto wgt = [&](double r) {
        return std::pow(r, p.d - 1) * std::pow(p.sigma + r * r, -0.5 * p.gamma) *
               std::exp(-0.5 * r * r);
    };
    // Dirichlet at r_max: last node dropped
    const std::size_t n = n_full - 1;
    std::vector<double> wnode(n), kface(n);  // kface[i] couples nodes i and i+1
    for (std::size_t i = 0; i < n; ++i)
        wnode[i] = cell_integral(wgt, g.faces[i], g.faces[i + 1]);
    for (std::size_t i = 0; i < n; ++i) {
        const double rr = (i + 1 < n_full) ? g.nodes[i + 1] : g.r_max();
        kface[i] = wgt(g.faces[i + 1]) / (rr - g.nodes[i]);
    }
    std::vector<double> diag(n, 0.0), sub(n - 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] += kface[i];  // coupling to the right neighbour (node n-1: to the Dirichlet wall)
        if (i + 1 < n) {
            diag[i + 1] += kface[i];
            sub[i] = -kface[i];
        }
    }
    if (p.mode_k > 0) {
        const double kk = double(p.mode_k) * (p.mode_k + p.d - 2);
        for (std::size_t i = 0; i < n; ++i) diag[i] += kk * wnode[i] / (g.nodes[i] * g.nodes[i]);
    }
    TridiagForm t;
    t.n = n;
    t.wnode = wnode;
    t.diag.resize(n);
    t.sub.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) t.diag[i] = diag[i] / wnode[i];
    for (std::size_t i = 0; i + 1 < n; ++i)
        t.sub[i] = sub[i] / std::sqrt(wnode[i] * wnode[i + 1]);
    return t;
}

}  // namespace

namespace {

// eigenvector of the symmetric tridiagonal (diag, sub) at an isolated
// eigenvalue lam, by shifted inverse iteration (deterministic start)
Eigen::VectorXd tridiag_eigenvector(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub,
                                    double lam) {
    const std::size_t n = std::size_t(diag.size());
    const double shift = lam + 1e-10 * std::max(1.0, std::abs(lam));
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    for (std::size_t i = 0; i < n; ++i) x[i] += 1e-3 * std::sin(0.7 * double(i));
    x.normalize();
    std::vector<double> a(n), b(n), c(n), cp(n), dp(n);
    for (std::size_t i = 0; i < n; ++i) {
        b[i] = diag[i] - shift;
        a[i] = (i > 0) ? sub[i - 1] : 0.0;
        c[i] = (i + 1 < n) ? sub[i] : 0.0;
    }
    for (int it = 0; it < 4; ++it) {
        cp[0] = c[0] / b[0];
        dp[0] = x[0] / b[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double denom = b[i] - a[i] * cp[i - 1];
            cp[i] = c[i] / denom;
            dp[i] = (x[i] - a[i] * dp[i - 1]) / denom;
        }
        x[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
        x.normalize();
    }
    return x;
}

}  // namespace

SpectralResult poincare_gap(const SpectralProblem& p) {
    if (!p.grid) throw std::invalid_argument("poincare_gap: no grid");
    if (p.count < 1) throw std::invalid_argument("poincare_gap: count must be >= 1");
    const TridiagForm t = assemble_poincare(p);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(t.diag, t.sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("poincare_gap: eigensolve failed");

    const RadialGrid& g = *p.grid;
    SpectralResult res;
    res.problem = p;
    const double half = 0.5 * g.r_max();
    const double deflate_tol = (p.mode_k == 0) ? 1e-6 : -1.0;  // kernel lives in the radial sector
    for (int idx = 0; idx < es.eigenvalues().size() && int(res.eigenvalues.size()) < p.count; ++idx) {
        const double lam = es.eigenvalues()[idx];
        if (lam < deflate_tol) continue;
        if (p.mode_k == 0 && std::abs(lam) <= deflate_tol) continue;  // deflated constant mode
        res.eigenvalues.push_back(lam);
        const Eigen::VectorXd y = tridiag_eigenvector(t.diag, t.sub, lam);
        double tail = 0.0;
        for (std::size_t i = 0; i < t.n; ++i)
            if (g.nodes[i] > half) tail += y[i] * y[i];
        res.eigenfunction_norm_tails.push_back(tail);
        res.continuum_adjacent.push_back(std::abs(lam - 4.0) <= 0.08);
    }
    // the domain-size invariant speaks about the lowest requested mode; the
    // higher polynomial modes carry naturally fatter tails
    if (!res.eigenfunction_norm_tails.empty() && res.eigenfunction_norm_tails.front() > 1e-4)
        res.tail_warning = true;
    if (res.eigenvalues.empty()) throw std::runtime_error("poincare_gap: no eigenvalues survived deflation");
    return res;
}

std::vector<double> sigma_continuity_scan(int d, double gamma, const std::vector<double>& sigmas,
                                          int mode_k, const RadialGrid* grid) {
    for (std::size_t i = 1; i < sigmas.size(); ++i)
        if (!(sigmas[i] >= sigmas[i - 1]))
            throw std::invalid_argument("sigma_continuity_scan: sigmas must be sorted");
    RadialGrid own;
    if (!grid) {
        own = spectral_default_grid(d);
        grid = &own;
    }
    std::vector<double> gaps;
    for (double s : sigmas) {
        SpectralProblem p;
        p.d = d;
        p.gamma = gamma;
        p.sigma = s;
        p.mode_k = mode_k;
        p.grid = grid;
        p.count = 1;
        gaps.push_back(poincare_gap(p).eigenvalues.front());
    }
    return gaps;
}

double ball_poincare_constant(double R, int d, double gamma, double k_weight, std::size_t n_nodes) {
    if (!(R > 0.0)) throw std::domain_error("ball_poincare_constant: R must be > 0");
    if (gamma < 0.0 || gamma >= double(d))
        throw std::domain_error("ball_poincare_constant: gamma must lie in [0, d)");
    if (!(k_weight >= 0.5 * gamma))
        throw std::domain_error("ball_poincare_constant: needs k >= gamma/2");

    const std::size_t n_log = n_nodes / 3;
    RadialGrid g = RadialGrid::blended(d, R, n_log, n_nodes - n_log, 1e-4 * R, 0.2 * R, false);
    const std::size_t n = g.size();
    auto wgt = [&](double r) { return std::pow(r, d - 1 - gamma); };
    auto cwgt = [&](double r) { return std::pow(r, d - 1 + k_weight - gamma); };

    std::vector<double> wnode(n), cvec(n), kface(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        wnode[i] = cell_integral(wgt, g.faces[i], g.faces[i + 1]);
        cvec[i] = cell_integral(cwgt, g.faces[i], g.faces[i + 1]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i)
        kface[i] = wgt(g.faces[i + 1]) / (g.nodes[i + 1] - g.nodes[i]);

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        T(i, i) += kface[i];
        T(i + 1, i + 1) += kface[i];
        T(i, i + 1) -= kface[i];
        T(i + 1, i) -= kface[i];
    }
    Eigen::VectorXd s(n), chat(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = 1.0 / std::sqrt(wnode[i]);
    T = s.asDiagonal() * T * s.asDiagonal();
    for (std::size_t i = 0; i < n; ++i) chat[i] = cvec[i] * s[i];
    chat.normalize();
    // deflate the weighted-mean direction exactly: restrict the form to the
    // orthogonal complement via the Householder reflector sending chat -> e0
    Eigen::VectorXd u = chat;
    u[0] += (chat[0] >= 0.0 ? 1.0 : -1.0);
    u.normalize();
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n) - 2.0 * u * u.transpose();
    Eigen::MatrixXd B = H.transpose() * T * H;
    Eigen::MatrixXd Bc = B.bottomRightCorner(n - 1, n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Bc + Bc.transpose()),
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("ball_poincare_constant: eigensolve failed");
    return es.eigenvalues()[0];
}

}  // namespace logfp
