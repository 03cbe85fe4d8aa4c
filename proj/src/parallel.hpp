#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace logfp {

// Parallel map over [0, n). Bodies must write disjoint locations only, so the
// result is bitwise identical to the serial loop. Reductions are NOT done
// through this helper: callers accumulate over precomputed arrays in index
// order, which keeps every output deterministic regardless of thread count.
template <class F>
inline void parallel_for(std::ptrdiff_t n, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
#else
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
#endif
}

// Serial twin of parallel_for, kept as the reference implementation for the
// kernel-consistency tests and the benchmark tool.
template <class F>
inline void serial_for(std::ptrdiff_t n, F&& body) {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace logfp
