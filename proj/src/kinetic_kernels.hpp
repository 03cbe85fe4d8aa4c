#pragma once

#include <cstddef>
#include <vector>

#include "parallel.hpp"

// Hot per-step kernels of the phase-space solver. Each kernel has an OpenMP
// version (used by the solver) and a serial reference twin under ref:: that
// the consistency tests and the benchmark tool compare against.

namespace logfp::kinetic_kernels {

inline double minmod(double a, double b) {
    if (a > 0.0 && b > 0.0) return a < b ? a : b;
    if (a < 0.0 && b < 0.0) return a > b ? a : b;
    return 0.0;
}

// One forward-Euler MUSCL update of a single line q[0..n) advected at constant
// speed a with zero-flux walls. cfl = |a| dt / h must be <= 1/2 (positivity).
inline void advect_line(double* q, std::size_t n, double a, double dt, double h,
                        double* flux /* size n+1 */) {
    flux[0] = 0.0;
    flux[n] = 0.0;
    for (std::size_t f = 1; f < n; ++f) {
        // face f sits between cells f-1 and f
        if (a > 0.0) {
            const std::size_t i = f - 1;
            const double dl = (i > 0) ? q[i] - q[i - 1] : 0.0;
            const double dr = q[i + 1] - q[i];
            flux[f] = a * (q[i] + 0.5 * minmod(dl, dr));
        } else {
            const std::size_t i = f;
            const double dl = q[i] - q[i - 1];
            const double dr = (i + 1 < n) ? q[i + 1] - q[i] : 0.0;
            flux[f] = a * (q[i] - 0.5 * minmod(dl, dr));
        }
    }
    const double r = dt / h;
    for (std::size_t i = 0; i < n; ++i) q[i] -= r * (flux[i + 1] - flux[i]);
}

// v-advection: row i moves at speed speeds[i]; rows are contiguous.
inline void advect_v(double* f, std::size_t nx, std::size_t nv, double dv, double dt,
                     const std::vector<double>& speeds) {
    parallel_for(std::ptrdiff_t(nx), [&](std::ptrdiff_t i) {
        thread_local std::vector<double> flux;
        flux.resize(nv + 1);
        advect_line(f + std::size_t(i) * nv, nv, speeds[std::size_t(i)], dt, dv, flux.data());
    });
}

// x-advection: column j moves at speed speeds[j]; columns are strided.
inline void advect_x(double* f, std::size_t nx, std::size_t nv, double dx, double dt,
                     const std::vector<double>& speeds) {
    parallel_for(std::ptrdiff_t(nv), [&](std::ptrdiff_t j) {
        thread_local std::vector<double> col, flux;
        col.resize(nx);
        flux.resize(nx + 1);
        for (std::size_t i = 0; i < nx; ++i) col[i] = f[i * nv + std::size_t(j)];
        advect_line(col.data(), nx, speeds[std::size_t(j)], dt, dx, flux.data());
        for (std::size_t i = 0; i < nx; ++i) f[i * nv + std::size_t(j)] = col[i];
    });
}

// Implicit Fokker-Planck collision sweep: solves (I - dt Lv) fnew = f row by
// row with the prefactored tridiagonal coefficients (same matrix every row).
struct FpFactors {
    std::vector<double> sub, diag, sup;  // (I - dt Lv) bands
    std::vector<double> cp;              // forward-eliminated superdiagonal
    double dt = -1.0;
};

inline void fp_collide_rows(double* f, std::size_t nx, std::size_t nv, const FpFactors& fac) {
    parallel_for(std::ptrdiff_t(nx), [&](std::ptrdiff_t i) {
        thread_local std::vector<double> dp;
        dp.resize(nv);
        double* row = f + std::size_t(i) * nv;
        dp[0] = row[0] / fac.diag[0];
        for (std::size_t j = 1; j < nv; ++j) {
            const double denom = fac.diag[j] - fac.sub[j] * fac.cp[j - 1];
            dp[j] = (row[j] - fac.sub[j] * dp[j - 1]) / denom;
        }
        row[nv - 1] = dp[nv - 1];
        for (std::size_t j = nv - 1; j-- > 0;) row[j] = dp[j] - fac.cp[j] * row[j + 1];
    });
}

// Dense scattering sweep: row i <- solve of the prefactored (I - dt Ls).
// `solve` must be callable as solve(row_in, row_out) and thread-safe.
template <class Solve>
inline void scatter_collide_rows(double* f, std::size_t nx, std::size_t nv, Solve&& solve) {
    parallel_for(std::ptrdiff_t(nx), [&](std::ptrdiff_t i) {
        solve(f + std::size_t(i) * nv, f + std::size_t(i) * nv);
    });
}

namespace ref {

// Plain-loop reference versions (no OpenMP, no factor caching).

inline void advect_v(double* f, std::size_t nx, std::size_t nv, double dv, double dt,
                     const std::vector<double>& speeds) {
    std::vector<double> flux(nv + 1);
    for (std::size_t i = 0; i < nx; ++i)
        advect_line(f + i * nv, nv, speeds[i], dt, dv, flux.data());
}

inline void advect_x(double* f, std::size_t nx, std::size_t nv, double dx, double dt,
                     const std::vector<double>& speeds) {
    std::vector<double> col(nx), flux(nx + 1);
    for (std::size_t j = 0; j < nv; ++j) {
        for (std::size_t i = 0; i < nx; ++i) col[i] = f[i * nv + j];
        advect_line(col.data(), nx, speeds[j], dt, dx, flux.data());
        for (std::size_t i = 0; i < nx; ++i) f[i * nv + j] = col[i];
    }
}

inline void fp_collide_rows(double* f, std::size_t nx, std::size_t nv, const FpFactors& fac) {
    std::vector<double> dp(nv);
    for (std::size_t i = 0; i < nx; ++i) {
        double* row = f + i * nv;
        dp[0] = row[0] / fac.diag[0];
        for (std::size_t j = 1; j < nv; ++j) {
            const double denom = fac.diag[j] - fac.sub[j] * fac.cp[j - 1];
            dp[j] = (row[j] - fac.sub[j] * dp[j - 1]) / denom;
        }
        row[nv - 1] = dp[nv - 1];
        for (std::size_t j = nv - 1; j-- > 0;) row[j] = dp[j] - fac.cp[j] * row[j + 1];
    }
}

}  // namespace ref

}  // namespace logfp::kinetic_kernels
