// Benchmark of the phase-space hot kernels: OpenMP path vs the serial
// reference implementations. Prints a wall-time table and the speedup.

#include <chrono>
#include <cstdio>
#include <numeric>
#include <vector>

#include "grids.hpp"
#include "kinetic.hpp"
#include "kinetic_kernels.hpp"
#include "parallel.hpp"
#include "potentials.hpp"

using namespace logfp;
namespace kk = logfp::kinetic_kernels;

namespace {

double now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

template <class F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now();
        fn();
        best = std::min(best, now() - t0);
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t nx = 512, nv = 256;
    int reps = 5;
    if (argc > 2) {
        nx = std::size_t(std::atoi(argv[1]));
        nv = std::size_t(std::atoi(argv[2]));
    }
    const PhaseGrid grid = PhaseGrid::make(nx, nv, 20.0, 8.0);
    HypoCalculus calc(grid, PotentialSpec::v2(0.5));

    PhaseField f(grid);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nv; ++j)
            f.at(i, j) = calc.maxwellian()[j] *
                         std::exp(-0.25 * grid.x_nodes[i] * grid.x_nodes[i]) *
                         (1.0 + 0.1 * std::sin(3.0 * grid.x_nodes[i]));

    std::vector<double> vspeed(nx);
    for (std::size_t i = 0; i < nx; ++i)
        vspeed[i] = -0.5 * grid.x_nodes[i] / (1.0 + grid.x_nodes[i] * grid.x_nodes[i]);

    kk::FpFactors fac;
    {
        // assemble the implicit collision factors once through a throwaway step
        CollisionSpec spec = CollisionSpec::fokker_planck();
        PhaseField tmp = calc.step(f, 1e-3, spec);
        (void)tmp;
        // rebuild factors locally for the raw-kernel benchmark
        const auto& M = calc.maxwellian();
        fac.sub.assign(nv, 0.0);
        fac.diag.assign(nv, 1.0);
        fac.sup.assign(nv, 0.0);
        const double dt = 1e-3, dv = grid.dv;
        for (std::size_t j = 0; j + 1 < nv; ++j) {
            const double mf = std::sqrt(M[j] * M[j + 1]);
            fac.diag[j] += dt / (dv * dv) * mf / M[j];
            fac.sup[j] -= dt / (dv * dv) * mf / M[j + 1];
            fac.diag[j + 1] += dt / (dv * dv) * mf / M[j + 1];
            fac.sub[j + 1] -= dt / (dv * dv) * mf / M[j];
        }
        fac.cp.assign(nv, 0.0);
        fac.cp[0] = fac.sup[0] / fac.diag[0];
        for (std::size_t j = 1; j < nv; ++j)
            fac.cp[j] = fac.sup[j] / (fac.diag[j] - fac.sub[j] * fac.cp[j - 1]);
    }

    std::printf("phase grid %zux%zu, %d threads\n\n", nx, nv, max_threads());
    std::printf("%-18s %12s %12s %8s\n", "kernel", "serial [ms]", "omp [ms]", "speedup");

    auto bench = [&](const char* name, auto&& serial_fn, auto&& omp_fn) {
        std::vector<double> base = f.values;
        std::vector<double> a = base, b = base;
        const double ts = time_best_of(reps, [&] { serial_fn(a.data()); });
        const double tp = time_best_of(reps, [&] { omp_fn(b.data()); });
        double diff = 0.0;
        for (std::size_t n = 0; n < a.size(); ++n) diff = std::max(diff, std::abs(a[n] - b[n]));
        std::printf("%-18s %12.3f %12.3f %8.2fx   (max |diff| = %.2e)\n", name, ts * 1e3, tp * 1e3,
                    ts / tp, diff);
    };

    bench("advect_x",
          [&](double* p) { kk::ref::advect_x(p, nx, nv, grid.dx, 1e-3, grid.v_nodes); },
          [&](double* p) { kk::advect_x(p, nx, nv, grid.dx, 1e-3, grid.v_nodes); });
    bench("advect_v",
          [&](double* p) { kk::ref::advect_v(p, nx, nv, grid.dv, 1e-3, vspeed); },
          [&](double* p) { kk::advect_v(p, nx, nv, grid.dv, 1e-3, vspeed); });
    bench("fp_collide",
          [&](double* p) { kk::ref::fp_collide_rows(p, nx, nv, fac); },
          [&](double* p) { kk::fp_collide_rows(p, nx, nv, fac); });

    // one full splitting step through the solver path
    CollisionSpec spec = CollisionSpec::fokker_planck();
    const double t_step = time_best_of(reps, [&] { PhaseField g2 = calc.step(f, 0.01, spec); (void)g2; });
    std::printf("\nfull step (dt=0.01): %.3f ms\n", t_step * 1e3);
    return 0;
}
