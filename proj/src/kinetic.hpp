#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "grids.hpp"
#include "kinetic_kernels.hpp"
#include "potentials.hpp"
#include "rates.hpp"

namespace logfp {

enum class CollisionKind { FokkerPlanck, Scattering };

struct CollisionSpec {
    CollisionKind kind = CollisionKind::FokkerPlanck;
    std::function<double(double, double)> sigma_fn;  // scattering rate sigma(v, v')
    double sigma_bar = M_SQRT1_2;  // upper bound; 1/sqrt(2) convention for Fokker-Planck

    static CollisionSpec fokker_planck() { return {}; }
    static CollisionSpec scattering(std::function<double(double, double)> fn, double bar);
};

struct HypoConfig {
    double epsilon = 0.1;
    double lambda_m = 1.0;     // microscopic coercivity constant
    double m_gamma = 3.0;      // 3 max{1, gamma}
    PotentialSpec potential;   // V2 only
    double k_moment = 2.0;

    static HypoConfig make(double gamma, double epsilon);
    void validate() const;
};

/// Snapshot of the twisted-norm machinery at one time.
struct HypoState {
    double t = 0.0;
    double mass = 0.0;
    double l2_sq = 0.0;        // ||f||^2 in L^2(M^{-1} e^V)
    double H = 0.0;            // ||f||^2/2 + eps <Af, f>
    double D = 0.0;            // five-term dissipation
    double micro = 0.0;        // ||(1-Pi)f||^2
    double macro_pair = 0.0;   // <AT Pi f, Pi f>
    double af_f = 0.0;         // <Af, f>
    // the five terms of D, in order: -<Lf,f>, eps<ATPi>, eps<AT(1-Pi)f,Pi f>,
    // -eps<TA(1-Pi)f,(1-Pi)f>, -eps<AL(1-Pi)f,f>
    double d_terms[5] = {0, 0, 0, 0, 0};
    std::vector<double> u, w;  // macro density e^V rho[f] and the elliptic lift
};

struct MacroPairing {
    double value = 0.0;        // |grad w|_V^2 + |Lt w|_V^2
    double grad_energy = 0.0;  // |grad w|_V^2
    double lt_energy = 0.0;    // |Lt w|_V^2
    double u_norm_sq = 0.0;    // |u|_V^2
    double margin_54 = 0.0;    // (5/4)|u|_V^2 - value
};

/// Discrete hypocoercivity calculus on one phase grid with one confinement
/// potential. Everything is built so that the Hilbert-space identities behind
/// the operator bounds hold exactly at the matrix level: the projector uses
/// the renormalized Maxwellian, the elliptic operator is -e^V G^T(m2 e^-V G)
/// with G the centered x-gradient, and every adjoint is the literal transpose.
class HypoCalculus {
public:
    HypoCalculus(const PhaseGrid& grid, const PotentialSpec& potential);
    ~HypoCalculus();

    const PhaseGrid& grid() const { return *grid_; }
    const PotentialSpec& potential() const { return potential_; }
    const std::vector<double>& maxwellian() const { return M_; }
    double m2() const { return m2_; }

    // inner products
    double omega_dot(const PhaseField& f, const PhaseField& g) const;
    double omega_norm_sq(const PhaseField& f) const { return omega_dot(f, f); }
    double v_dot(const std::vector<double>& a, const std::vector<double>& b) const;  // sum a b e^-V dx

    // projections and macro fields
    PhaseField project_pi(const PhaseField& f) const;
    std::vector<double> density_u(const PhaseField& f) const;   // e^V * int f dv
    std::vector<double> current_j(const PhaseField& f) const;   // int v f dv

    // x-space machinery
    std::vector<double> grad_x(const std::vector<double>& q) const;
    std::vector<double> grad_x_transpose(const std::vector<double>& p) const;
    std::vector<double> elliptic_lt(const std::vector<double>& q) const;      // Lt q
    std::vector<double> solve_w(const std::vector<double>& u) const;          // (I - Lt) w = u
    double grad_energy(const std::vector<double>& w) const;                   // m2 sum e^-V (Gw)^2 dx

    // operators of the twisted norm
    PhaseField apply_T(const PhaseField& f) const;        // v d/dx - V'(x) d/dv, centered
    std::vector<double> a_potential(const PhaseField& f) const;  // q with Af = q M e^{-V}
    PhaseField field_from_potential(const std::vector<double>& q) const;      // q M e^{-V}
    double inner_Af_f(const PhaseField& f) const;
    MacroPairing macro_pairing(const PhaseField& f) const;

    // collisions
    PhaseField apply_collision(const PhaseField& f, const CollisionSpec& spec) const;
    double measured_lambda_m(const CollisionSpec& spec) const;  // exact discrete sector gap

    // functionals and stepping
    HypoState hypo_functionals(const PhaseField& f, const HypoConfig& cfg,
                               const CollisionSpec& spec) const;
    PhaseField step(const PhaseField& f, double dt, const CollisionSpec& spec) const;

private:
    struct CollisionCache;
    const CollisionCache& collision_cache(const CollisionSpec& spec, double dt) const;
    void validate_scattering(const CollisionSpec& spec) const;

    const PhaseGrid* grid_;
    PotentialSpec potential_;
    std::vector<double> M_, Minv_;       // renormalized Maxwellian and inverse
    std::vector<double> eV_, emV_, Vp_;  // e^V, e^-V, V' at x-nodes
    double m2_ = 1.0;
    double dx_ = 0.0, dv_ = 0.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> elliptic_lu_;  // of (I - Lt)
    mutable std::unique_ptr<CollisionCache> cache_;
};

/// lambda_eps = (lambda_m - sqrt((lambda_m - 2 eps)^2 + eps^2 (m_gamma + sqrt(2) sigma_bar)^2))/2.
double lambda_eps(double lambda_m, double eps, double m_gamma, double sigma_bar);

/// Phi(s; M) = 2 s + K M^{2(1-a)} s^a (strictly increasing in s >= 0).
double nash_envelope(double s, double Mk, double K_const, double a);
/// Monotone-bisection inverse: Phi(nash_envelope_inverse(y)) = y.
double nash_envelope_inverse(double y, double Mk, double K_const, double a);

/// dz/dt = -lambda_eps * Phi^{-1}(2 z/(1+eps); C_k (1+t)^{k/2}), integrated on a
/// geometric time schedule with RK4 substeps.
DecaySeries integrate_z_ode(double z0, double lam_eps, double K_const, double a, double eps,
                            double Ck, double k_exp, double t_end, std::size_t n_samples);

/// M_l = l(l-2+d-gamma) M_{l-2} - l(l-2-gamma) M_{l-4} + J_l.
/// `moments` must hold M_{l-2} and M_{l-4} (negative orders included).
double elliptic_moment_recursion(int ell, int d, double gamma,
                                 const std::map<int, double>& moments, double J_ell);

struct KineticTrajectory {
    std::vector<HypoState> states;
    std::map<std::string, DecaySeries> series;  // H D micro macro_pair mass J2 K2 l2_norm + Jk
    bool halted_on_boundary_mass = false;
    double t_final = 0.0;
};

struct KineticRunConfig {
    double t_end = 10.0;
    double dt = 0.01;           // outer splitting step (advection subcycles to CFL)
    double sample_every = 0.1;
    double boundary_mass_halt = 1e-6;
};

KineticTrajectory run_kinetic(const PhaseField& f0, const HypoCalculus& calc,
                              const HypoConfig& cfg, const CollisionSpec& spec,
                              const KineticRunConfig& run);

}  // namespace logfp
