#include "kinetic.hpp"

#include <cmath>
#include <stdexcept>

namespace logfp {

CollisionSpec CollisionSpec::scattering(std::function<double(double, double)> fn, double bar) {
    if (!(bar >= 1.0)) throw std::invalid_argument("CollisionSpec: sigma_bar must be >= 1");
    CollisionSpec s;
    s.kind = CollisionKind::Scattering;
    s.sigma_fn = std::move(fn);
    s.sigma_bar = bar;
    return s;
}

HypoConfig HypoConfig::make(double gamma, double epsilon) {
    HypoConfig c;
    c.epsilon = epsilon;
    c.m_gamma = 3.0 * std::max(1.0, gamma);
    c.potential = PotentialSpec::v2(gamma);
    return c;
}

void HypoConfig::validate() const {
    if (!(epsilon > 0.0) || epsilon >= 1.0)
        throw std::invalid_argument("HypoConfig: epsilon must lie in (0,1)");
    if (!(lambda_m > 0.0)) throw std::invalid_argument("HypoConfig: lambda_m must be > 0");
    if (potential.kind == PotentialKind::V1)
        throw std::invalid_argument("HypoConfig: kinetic runs support V2 (or no potential) only");
}

// ---------------------------------------------------------------------------
// construction

HypoCalculus::~HypoCalculus() = default;

HypoCalculus::HypoCalculus(const PhaseGrid& grid, const PotentialSpec& potential)
    : grid_(&grid), potential_(potential) {
    const std::size_t nx = grid.nx(), nv = grid.nv();
    dx_ = grid.dx;
    dv_ = grid.dv;
    M_.resize(nv);
    Minv_.resize(nv);
    double mass = 0.0;
    for (std::size_t j = 0; j < nv; ++j) {
        M_[j] = std::exp(-0.5 * grid.v_nodes[j] * grid.v_nodes[j]);
        mass += M_[j] * dv_;
    }
    // renormalize so the discrete projector is exactly idempotent
    for (std::size_t j = 0; j < nv; ++j) {
        M_[j] /= mass;
        Minv_[j] = 1.0 / M_[j];
    }
    m2_ = 0.0;
    for (std::size_t j = 0; j < nv; ++j) m2_ += grid.v_nodes[j] * grid.v_nodes[j] * M_[j] * dv_;

    eV_.resize(nx);
    emV_.resize(nx);
    Vp_.resize(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        const double V = eval_potential(potential_, std::abs(grid.x_nodes[i]));
        eV_[i] = std::exp(V);
        emV_[i] = std::exp(-V);
        const double r = grid.x_nodes[i];
        Vp_[i] = (potential_.kind == PotentialKind::V2) ? potential_.gamma * r / (1.0 + r * r) : 0.0;
    }

    // assemble I - Lt with Lt q = -e^V G^T (m2 e^-V G q); G has two entries per
    // row, so the matrix is built row-of-G at a time
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(nx, nx);
    auto add_row = [&](std::size_t m, std::size_t i1, double c1, std::size_t i2, double c2) {
        const double d = m2_ * emV_[m];
        const std::size_t idx[2] = {i1, i2};
        const double cf[2] = {c1, c2};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                A(idx[a], idx[b]) += eV_[idx[a]] * cf[a] * d * cf[b];
    };
    add_row(0, 0, -1.0 / dx_, 1, 1.0 / dx_);
    for (std::size_t m = 1; m + 1 < nx; ++m) add_row(m, m - 1, -0.5 / dx_, m + 1, 0.5 / dx_);
    add_row(nx - 1, nx - 2, -1.0 / dx_, nx - 1, 1.0 / dx_);
    elliptic_lu_.compute(A);
}

// ---------------------------------------------------------------------------
// inner products, projections

double HypoCalculus::omega_dot(const PhaseField& f, const PhaseField& g) const {
    const std::size_t nx = grid_->nx(), nv = grid_->nv();
    double s = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        double row = 0.0;
        const double* fi = f.values.data() + i * nv;
        const double* gi = g.values.data() + i * nv;
        for (std::size_t j = 0; j < nv; ++j) row += fi[j] * gi[j] * Minv_[j];
        s += row * eV_[i];
    }
    return s * dx_ * dv_;
}

double HypoCalculus::v_dot(const std::vector<double>& a, const std::vector<double>& b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i] * emV_[i];
    return s * dx_;
}

PhaseField HypoCalculus::project_pi(const PhaseField& f) const {
    const std::size_t nx = grid_->nx(), nv = grid_->nv();
    PhaseField out(*grid_);
    for (std::size_t i = 0; i < nx; ++i) {
        double rho = 0.0;
        for (std::size_t j = 0; j < nv; ++j) rho += f.values[i * nv + j];
        rho *= dv_;
        for (std::size_t j = 0; j < nv; ++j) out.values[i * nv + j] = M_[j] * rho;
    }
    return out;
}

std::vector<double> HypoCalculus::density_u(const PhaseField& f) const {
    const std::size_t nx = grid_->nx(), nv = grid_->nv();
    std::vector<double> u(nx, 0.0);
    for (std::size_t i = 0; i < nx; ++i) {
        double rho = 0.0;
        for (std::size_t j = 0; j < nv; ++j) rho += f.values[i * nv + j];
        u[i] = eV_[i] * rho * dv_;
    }
    return u;
}

std::vector<double> HypoCalculus::current_j(const PhaseField& f) const {
    const std::size_t nx = grid_->nx(), nv = grid_->nv();
    std::vector<double> j(nx, 0.0);
    for (std::size_t i = 0; i < nx; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < nv; ++k) s += grid_->v_nodes[k] * f.values[i * nv + k];
        j[i] = s * dv_;
    }
    return j;
}

// ---------------------------------------------------------------------------
// x-space machinery

std::vector<double> HypoCalculus::grad_x(const std::vector<double>& q) const {
    const std::size_t n = q.size();
    std::vector<double> g(n);
    g[0] = (q[1] - q[0]) / dx_;
    for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (q[i + 1] - q[i - 1]) / (2.0 * dx_);
    g[n - 1] = (q[n - 1] - q[n - 2]) / dx_;
    return g;
}

std::vector<double> HypoCalculus::grad_x_transpose(const std::vector<double>& p) const {
    const std::size_t n = p.size();
    std::vector<double> g(n, 0.0);
    g[0] += -p[0] / dx_;
    g[1] += p[0] / dx_;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        g[i - 1] += -p[i] / (2.0 * dx_);
        g[i + 1] += p[i] / (2.0 * dx_);
    }
    g[n - 2] += -p[n - 1] / dx_;
    g[n - 1] += p[n - 1] / dx_;
    return g;
}

std::vector<double> HypoCalculus::elliptic_lt(const std::vector<double>& q) const {
    std::vector<double> p = grad_x(q);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] *= m2_ * emV_[i];
    std::vector<double> g = grad_x_transpose(p);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= -eV_[i];
    return g;
}

std::vector<double> HypoCalculus::solve_w(const std::vector<double>& u) const {
    Eigen::Map<const Eigen::VectorXd> b(u.data(), u.size());
    Eigen::VectorXd w = elliptic_lu_.solve(b);
    if (!w.allFinite()) throw std::runtime_error("solve_w: elliptic solve produced non-finite values");
    return std::vector<double>(w.data(), w.data() + w.size());
}

double HypoCalculus::grad_energy(const std::vector<double>& w) const {
    const std::vector<double> g = grad_x(w);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += emV_[i] * g[i] * g[i];
    return m2_ * s * dx_;
}

// ---------------------------------------------------------------------------
// twisted-norm operators

PhaseField HypoCalculus::apply_T(const PhaseField& f) const {
    const std::size_t nx = grid_->nx(), nv = grid_->nv();
    PhaseField out(*grid_);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
            // centered x-derivative
            double fx;
            if (i == 0) fx = (f.at(1, j) - f.at(0, j)) / dx_;
            else if (i + 1 == nx) fx = (f.at(nx - 1, j) - f.at(nx - 2, j)) / dx_;
            else fx = (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * dx_);
            double fv;
            if (j == 0) fv = (f.at(i, 1) - f.at(i, 0)) / dv_;
            else if (j + 1 == nv) fv = (f.at(i, nv - 1) - f.at(i, nv - 2)) / dv_;
            else fv = (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * dv_);
            out.at(i, j) = grid_->v_nodes[j] * fx - Vp_[i] * fv;
        }
    }
    return out;
}

std::vector<double> HypoCalculus::a_potential(const PhaseField& f) const {
    std::vector<double> s = grad_x_transpose(current_j(f));
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= eV_[i];
    return solve_w(s);
}

PhaseField HypoCalculus::field_from_potential(const std::vector<double>& q) const {
    const std::size_t nx = grid_->nx(), nv = grid_->nv();
    PhaseField out(*grid_);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nv; ++j) out.values[i * nv + j] = q[i] * emV_[i] * M_[j];
    return out;
}

double HypoCalculus::inner_Af_f(const PhaseField& f) const {
    const std::vector<double> q = a_potential(f);
    return v_dot(q, density_u(f));
}

MacroPairing HypoCalculus::macro_pairing(const PhaseField& f) const {
    const std::vector<double> u = density_u(f);
    const std::vector<double> w = solve_w(u);
    MacroPairing mp;
    mp.grad_energy = grad_energy(w);
    const std::vector<double> lt = elliptic_lt(w);
    mp.lt_energy = v_dot(lt, lt);
    mp.value = mp.grad_energy + mp.lt_energy;
    mp.u_norm_sq = v_dot(u, u);
    mp.margin_54 = 1.25 * mp.u_norm_sq - mp.value;
    return mp;
}

// ---------------------------------------------------------------------------
// collisions

struct HypoCalculus::CollisionCache {
    // Fokker-Planck: conservative flux factors and prefactored (I - dt Lv)
    std::vector<double> mface;  // sqrt(M_j M_{j+1})
    kinetic_kernels::FpFactors fp;
    // scattering: rate matrix, loss vector, and prefactored dense solve
    Eigen::MatrixXd gain;       // sigma(v_j, v_k) M_j dv
    std::vector<double> loss;   // sum_k sigma(v_j, v_k) M_k dv
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    double lu_dt = -1.0;
    bool scattering_checked = false;
    CollisionKind kind = CollisionKind::FokkerPlanck;
};

void HypoCalculus::validate_scattering(const CollisionSpec& spec) const {
    const std::size_t nv = grid_->nv();
    if (!spec.sigma_fn) throw std::invalid_argument("scattering spec: missing sigma_fn");
    double worst_h2 = 0.0;
    for (std::size_t j = 0; j < nv; ++j) {
        double h2 = 0.0;
        for (std::size_t k = 0; k < nv; ++k) {
            const double s = spec.sigma_fn(grid_->v_nodes[j], grid_->v_nodes[k]);
            if (!(s >= 1.0 - 1e-12) || !(s <= spec.sigma_bar + 1e-12))
                throw std::invalid_argument("scattering spec: sigma out of [1, sigma_bar] on the grid");
            h2 += (s - spec.sigma_fn(grid_->v_nodes[k], grid_->v_nodes[j])) * M_[k] * dv_;
        }
        worst_h2 = std::max(worst_h2, std::abs(h2));
    }
    if (worst_h2 > 1e-8)
        throw std::invalid_argument("scattering spec: symmetry condition violated (residual " +
                                    std::to_string(worst_h2) + ")");
}

const HypoCalculus::CollisionCache& HypoCalculus::collision_cache(const CollisionSpec& spec,
                                                                  double dt) const {
    const std::size_t nv = grid_->nv();
    if (!cache_ || cache_->kind != spec.kind) {
        cache_ = std::make_unique<CollisionCache>();
        cache_->kind = spec.kind;
        if (spec.kind == CollisionKind::FokkerPlanck) {
            cache_->mface.resize(nv - 1);
            for (std::size_t j = 0; j + 1 < nv; ++j)
                cache_->mface[j] = std::sqrt(M_[j] * M_[j + 1]);
        } else {
            validate_scattering(spec);
            cache_->scattering_checked = true;
            cache_->gain.resize(nv, nv);
            cache_->loss.assign(nv, 0.0);
            for (std::size_t j = 0; j < nv; ++j)
                for (std::size_t k = 0; k < nv; ++k) {
                    const double s = spec.sigma_fn(grid_->v_nodes[j], grid_->v_nodes[k]);
                    cache_->gain(j, k) = s * M_[j] * dv_;
                    cache_->loss[j] += s * M_[k] * dv_;
                }
        }
    }
    if (dt > 0.0 && cache_->lu_dt != dt) {
        if (spec.kind == CollisionKind::FokkerPlanck) {
            auto& fp = cache_->fp;
            fp.sub.assign(nv, 0.0);
            fp.diag.assign(nv, 1.0);
            fp.sup.assign(nv, 0.0);
            const double r = dt / (dv_ * dv_);
            for (std::size_t j = 0; j + 1 < nv; ++j) {
                const double mf = cache_->mface[j];
                fp.diag[j] += r * mf / M_[j];
                fp.sup[j] -= r * mf / M_[j + 1];
                fp.diag[j + 1] += r * mf / M_[j + 1];
                fp.sub[j + 1] -= r * mf / M_[j];
            }
            fp.cp.assign(nv, 0.0);
            fp.cp[0] = fp.sup[0] / fp.diag[0];
            for (std::size_t j = 1; j < nv; ++j)
                fp.cp[j] = fp.sup[j] / (fp.diag[j] - fp.sub[j] * fp.cp[j - 1]);
            fp.dt = dt;
        } else {
            Eigen::MatrixXd A = Eigen::MatrixXd::Identity(nv, nv) - dt * cache_->gain;
            for (std::size_t j = 0; j < nv; ++j) A(j, j) += dt * cache_->loss[j];
            cache_->lu.compute(A);
        }
        cache_->lu_dt = dt;
    }
    return *cache_;
}

PhaseField HypoCalculus::apply_collision(const PhaseField& f, const CollisionSpec& spec) const {
    const std::size_t nx = grid_->nx(), nv = grid_->nv();
    const CollisionCache& cc = collision_cache(spec, 0.0);
    PhaseField out(*grid_);
    if (spec.kind == CollisionKind::FokkerPlanck) {
        for (std::size_t i = 0; i < nx; ++i) {
            const double* row = f.values.data() + i * nv;
            double* orow = out.values.data() + i * nv;
            double flux_prev = 0.0;  // zero flux at the lower wall
            for (std::size_t j = 0; j < nv; ++j) {
                double flux_next = 0.0;
                if (j + 1 < nv)
                    flux_next = cc.mface[j] * (row[j + 1] * Minv_[j + 1] - row[j] * Minv_[j]) / dv_;
                orow[j] = (flux_next - flux_prev) / dv_;
                flux_prev = flux_next;
            }
        }
    } else {
        for (std::size_t i = 0; i < nx; ++i) {
            const double* row = f.values.data() + i * nv;
            double* orow = out.values.data() + i * nv;
            for (std::size_t j = 0; j < nv; ++j) {
                double gain = 0.0;
                for (std::size_t k = 0; k < nv; ++k) gain += cc.gain(j, k) * row[k];
                orow[j] = gain - cc.loss[j] * row[j];
            }
        }
    }
    return out;
}

double HypoCalculus::measured_lambda_m(const CollisionSpec& spec) const {
    const std::size_t nv = grid_->nv();
    // quadratic form of -L in the v-sector, symmetrized by W^{-1/2} with
    // W = diag(M^{-1} dv); the kernel mode is the Maxwellian itself
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    if (spec.kind == CollisionKind::FokkerPlanck) {
        const CollisionCache& cc = collision_cache(spec, 0.0);
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(nv);
        Eigen::VectorXd sub = Eigen::VectorXd::Zero(nv - 1);
        // form: sum_faces mface (d(f/M)/dv)^2 dv ; f-coordinates, then W^{-1/2} scaling
        for (std::size_t j = 0; j + 1 < nv; ++j) {
            const double c = cc.mface[j] / dv_;  // * dv for the sum, /dv^2 from the difference
            diag[j] += c * Minv_[j] * Minv_[j];
            diag[j + 1] += c * Minv_[j + 1] * Minv_[j + 1];
            sub[j] = -c * Minv_[j] * Minv_[j + 1];
        }
        // K x = lambda W x with W = diag(Minv dv): T = W^{-1/2} K W^{-1/2}
        Eigen::VectorXd td(nv), ts(nv - 1);
        for (std::size_t j = 0; j < nv; ++j) td[j] = diag[j] * M_[j] / dv_;
        for (std::size_t j = 0; j + 1 < nv; ++j)
            ts[j] = sub[j] * std::sqrt(M_[j] * M_[j + 1]) / dv_;
        es.computeFromTridiagonal(td, ts, Eigen::EigenvaluesOnly);
    } else {
        const CollisionCache& cc = collision_cache(spec, 0.0);
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nv, nv);
        for (std::size_t j = 0; j < nv; ++j) {
            K(j, j) += cc.loss[j] * Minv_[j] * dv_;
            for (std::size_t k = 0; k < nv; ++k) K(j, k) -= cc.gain(j, k) * Minv_[j] * dv_;
        }
        // symmetrize exactly (H2 kernels make K symmetric up to roundoff)
        Eigen::MatrixXd Ks = 0.5 * (K + K.transpose());
        Eigen::VectorXd whalf(nv);
        for (std::size_t j = 0; j < nv; ++j) whalf[j] = std::sqrt(M_[j] / dv_);
        Eigen::MatrixXd T = whalf.asDiagonal() * Ks * whalf.asDiagonal();
        es.compute(T, Eigen::EigenvaluesOnly);
    }
    if (es.info() != Eigen::Success) throw std::runtime_error("measured_lambda_m: eigensolve failed");
    // smallest eigenvalue is the Maxwellian kernel (~0); the gap is the next one
    return es.eigenvalues()[1];
}

// ---------------------------------------------------------------------------
// functionals

HypoState HypoCalculus::hypo_functionals(const PhaseField& f, const HypoConfig& cfg,
                                         const CollisionSpec& spec) const {
    cfg.validate();
    f.require_finite("hypo_functionals");
    HypoState st;
    const PhaseField pif = project_pi(f);
    PhaseField fluc = f;
    for (std::size_t n = 0; n < fluc.values.size(); ++n) fluc.values[n] -= pif.values[n];

    st.mass = phase_integral(f, [](double, double) { return 1.0; });
    st.l2_sq = omega_norm_sq(f);
    st.micro = omega_norm_sq(fluc);
    st.u = density_u(f);
    st.w = solve_w(st.u);

    // <AT Pi f, Pi f> = <u, u - w>_V = grad + lt energies (exact identity)
    st.macro_pair = grad_energy(st.w) + [&] {
        const std::vector<double> lt = elliptic_lt(st.w);
        return v_dot(lt, lt);
    }();

    st.af_f = inner_Af_f(f);
    st.H = 0.5 * st.l2_sq + cfg.epsilon * st.af_f;

    const double eps = cfg.epsilon;
    const PhaseField lf = apply_collision(f, spec);
    st.d_terms[0] = -omega_dot(lf, f);
    st.d_terms[1] = eps * st.macro_pair;

    // <AT(1-Pi)f, Pi f> = sum_i (Gw)_i j[T(1-Pi)f]_i dx
    const std::vector<double> gw = grad_x(st.w);
    {
        const PhaseField tfluc = apply_T(fluc);
        const std::vector<double> jt = current_j(tfluc);
        double s = 0.0;
        for (std::size_t i = 0; i < gw.size(); ++i) s += gw[i] * jt[i];
        st.d_terms[2] = eps * s * dx_;
    }
    // <TA(1-Pi)f, (1-Pi)f> = sum_i (G q_A)_i j[(1-Pi)f]_i dx
    {
        const std::vector<double> qa = a_potential(fluc);
        const std::vector<double> gqa = grad_x(qa);
        const std::vector<double> jf = current_j(fluc);
        double s = 0.0;
        for (std::size_t i = 0; i < gqa.size(); ++i) s += gqa[i] * jf[i];
        st.d_terms[3] = -eps * s * dx_;
    }
    // <AL(1-Pi)f, f> = sum_i (Gw)_i j[L(1-Pi)f]_i dx
    {
        const PhaseField lfluc = apply_collision(fluc, spec);
        const std::vector<double> jl = current_j(lfluc);
        double s = 0.0;
        for (std::size_t i = 0; i < gw.size(); ++i) s += gw[i] * jl[i];
        st.d_terms[4] = -eps * s * dx_;
    }
    st.D = st.d_terms[0] + st.d_terms[1] + st.d_terms[2] + st.d_terms[3] + st.d_terms[4];
    return st;
}

// ---------------------------------------------------------------------------
// time stepping

namespace {

void advect_with_cfl(double* f, std::size_t nx, std::size_t nv, double h, double dt,
                     const std::vector<double>& speeds, bool along_v) {
    double amax = 0.0;
    for (double a : speeds) amax = std::max(amax, std::abs(a));
    if (amax == 0.0 || dt == 0.0) return;
    const std::size_t nsub = std::max<std::size_t>(1, std::size_t(std::ceil(amax * dt / (0.45 * h))));
    const double dts = dt / double(nsub);
    for (std::size_t s = 0; s < nsub; ++s) {
        if (along_v)
            kinetic_kernels::advect_v(f, nx, nv, h, dts, speeds);
        else
            kinetic_kernels::advect_x(f, nx, nv, h, dts, speeds);
    }
}

}  // namespace

PhaseField HypoCalculus::step(const PhaseField& f, double dt, const CollisionSpec& spec) const {
    const std::size_t nx = grid_->nx(), nv = grid_->nv();
    PhaseField out = f;
    std::vector<double> vspeed(nx);
    for (std::size_t i = 0; i < nx; ++i) vspeed[i] = -Vp_[i];

    advect_with_cfl(out.values.data(), nx, nv, dx_, 0.5 * dt, grid_->v_nodes, false);
    advect_with_cfl(out.values.data(), nx, nv, dv_, 0.5 * dt, vspeed, true);

    const CollisionCache& cc = collision_cache(spec, dt);
    if (spec.kind == CollisionKind::FokkerPlanck) {
        kinetic_kernels::fp_collide_rows(out.values.data(), nx, nv, cc.fp);
    } else {
        kinetic_kernels::scatter_collide_rows(out.values.data(), nx, nv,
                                              [&](const double* in, double* o) {
                                                  Eigen::Map<const Eigen::VectorXd> b(in, nv);
                                                  Eigen::VectorXd x = cc.lu.solve(b);
                                                  for (std::size_t j = 0; j < nv; ++j) o[j] = x[j];
                                              });
    }

    advect_with_cfl(out.values.data(), nx, nv, dv_, 0.5 * dt, vspeed, true);
    advect_with_cfl(out.values.data(), nx, nv, dx_, 0.5 * dt, grid_->v_nodes, false);

    for (double v : out.values)
        if (!std::isfinite(v)) throw std::runtime_error("step_kinetic: NaN detected");
    return out;
}

// ---------------------------------------------------------------------------
// scalar helpers

double lambda_eps(double lambda_m, double eps, double m_gamma, double sigma_bar) {
    if (!(lambda_m > 0.0) || eps < 0.0 || !(m_gamma > 0.0) || !(sigma_bar > 0.0))
        throw std::domain_error("lambda_eps: arguments must be positive");
    const double c = m_gamma + std::sqrt(2.0) * sigma_bar;
    const double disc = (lambda_m - 2.0 * eps) * (lambda_m - 2.0 * eps) + eps * eps * c * c;
    return 0.5 * (lambda_m - std::sqrt(disc));
}

double nash_envelope(double s, double Mk, double K_const, double a) {
    if (s < 0.0) throw std::domain_error("nash_envelope: s must be >= 0");
    if (!(Mk > 0.0) || !(K_const > 0.0) || !(a > 0.0) || !(a < 1.0))
        throw std::domain_error("nash_envelope: bad parameters");
    return 2.0 * s + K_const * std::pow(Mk, 2.0 * (1.0 - a)) * std::pow(s, a);
}

double nash_envelope_inverse(double y, double Mk, double K_const, double a) {
    if (y < 0.0) throw std::domain_error("nash_envelope_inverse: y must be >= 0");
    if (y == 0.0) return 0.0;
    double lo = 0.0, hi = std::max(1.0, 0.5 * y);
    while (nash_envelope(hi, Mk, K_const, a) < y) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (nash_envelope(mid, Mk, K_const, a) < y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

DecaySeries integrate_z_ode(double z0, double lam_eps, double K_const, double a, double eps,
                            double Ck, double k_exp, double t_end, std::size_t n_samples) {
    if (!(z0 > 0.0)) throw std::domain_error("integrate_z_ode: z0 must be > 0");
    auto rhs = [&](double t, double z) {
        if (z <= 0.0) return 0.0;
        const double Mk = Ck * std::pow(1.0 + t, 0.5 * k_exp);
        return -lam_eps * nash_envelope_inverse(2.0 * z / (1.0 + eps), Mk, K_const, a);
    };
    DecaySeries out;
    out.label = "z_ode";
    double t = 0.0, z = z0;
    const double t_first = 1e-2;
    const double ratio = std::pow(t_end / t_first, 1.0 / double(n_samples - 1));
    std::vector<double> samples;
    for (std::size_t k = 0; k < n_samples; ++k) samples.push_back(t_first * std::pow(ratio, double(k)));
    for (double ts : samples) {
        const double gap = ts - t;
        const std::size_t nsub = std::max<std::size_t>(8, std::size_t(std::ceil(gap / (0.05 * (1.0 + t)))));
        const double h = gap / double(nsub);
        for (std::size_t s = 0; s < nsub; ++s) {
            const double k1 = rhs(t, z);
            const double k2 = rhs(t + 0.5 * h, z + 0.5 * h * k1);
            const double k3 = rhs(t + 0.5 * h, z + 0.5 * h * k2);
            const double k4 = rhs(t + h, z + h * k3);
            z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += h;
            if (z <= 0.0) { z = 1e-300; }
        }
        t = ts;
        out.push(t, z);
    }
    return out;
}

double elliptic_moment_recursion(int ell, int d, double gamma,
                                 const std::map<int, double>& moments, double J_ell) {
    auto get = [&](int k) {
        auto it = moments.find(k);
        if (it == moments.end())
            throw std::invalid_argument("elliptic_moment_recursion: missing moment of order " +
                                        std::to_string(k));
        return it->second;
    };
    const double l = double(ell);
    return l * (l - 2.0 + d - gamma) * get(ell - 2) - l * (l - 2.0 - gamma) * get(ell - 4) + J_ell;
}

// ---------------------------------------------------------------------------
// trajectory driver

KineticTrajectory run_kinetic(const PhaseField& f0, const HypoCalculus& calc,
                              const HypoConfig& cfg, const CollisionSpec& spec,
                              const KineticRunConfig& run) {
    cfg.validate();
    f0.require_finite("run_kinetic initial datum");
    const PhaseGrid& g = calc.grid();
    KineticTrajectory traj;
    auto put = [&](const std::string& key, double t, double v) {
        auto it = traj.series.find(key);
        if (it == traj.series.end()) {
            DecaySeries s;
            s.label = key;
            it = traj.series.emplace(key, std::move(s)).first;
        }
        it->second.push(t, v);
    };
    const double mass0 = phase_integral(f0, [](double, double) { return 1.0; });

    auto boundary_mass = [&](const PhaseField& f) {
        const std::size_t nx = g.nx(), nv = g.nv();
        double s = 0.0;
        for (std::size_t i : {std::size_t(0), std::size_t(1), nx - 2, nx - 1})
            for (std::size_t j = 0; j < nv; ++j) s += std::abs(f.values[i * nv + j]);
        return s * g.dx * g.dv / std::max(mass0, 1e-300);
    };

    auto sample = [&](double t, const PhaseField& f) {
        HypoState st = calc.hypo_functionals(f, cfg, spec);
        st.t = t;
        const double J2 = phase_integral(f, [](double x, double) { return 1.0 + x * x; });
        const double K2 = phase_integral(f, [](double, double v) { return v * v; });
        const double Jk = phase_integral(f, [&](double x, double) {
            return std::pow(1.0 + x * x, 0.5 * cfg.k_moment);
        });
        traj.states.push_back(st);
        if (t > 0.0) {
            put("H", t, st.H);
            put("D", t, st.D);
            put("micro", t, st.micro);
            put("macro_pair", t, st.macro_pair);
            put("mass", t, st.mass);
            put("J2", t, J2);
            put("K2", t, K2);
            put("Jk", t, Jk);
            put("l2_norm", t, std::sqrt(st.l2_sq));
        }
    };

    PhaseField f = f0;
    sample(0.0, f);
    double t = 0.0, next_sample = run.sample_every;
    while (t < run.t_end - 1e-12) {
        const double dt = std::min(run.dt, run.t_end - t);
        f = calc.step(f, dt, spec);
        t += dt;
        if (t + 1e-12 >= next_sample || t >= run.t_end - 1e-12) {
            sample(t, f);
            next_sample += run.sample_every;
            if (boundary_mass(f) > run.boundary_mass_halt) {
                traj.halted_on_boundary_mass = true;
                break;
            }
        }
    }
    traj.t_final = t;
    return traj;
}

}  // namespace logfp
