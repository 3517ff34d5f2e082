#pragma once

#include <cstddef>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace gammadyn::par {

/// Execution mode for the data-parallel kernels. Every kernel has a serial
/// reference path; the parallel path must produce bit-identical output
/// (each work item writes its own slot, no shared floating-point reduction).
enum class Exec { Serial, Parallel };

/// Worker count: GAMMADYN_THREADS caps the OpenMP default when set.
int max_threads();

template <class F>
void for_index(std::size_t n, Exec exec, F&& fn) {
#if defined(_OPENMP)
    if (exec == Exec::Parallel && n > 1) {
        const int threads = max_threads();
        #pragma omp parallel for schedule(static) num_threads(threads)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            fn(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

} // namespace gammadyn::par
