#ifndef LLL_PARALLEL_HPP
#define LLL_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lll {

inline int effective_jobs(int jobs) {
#ifdef _OPENMP
    if (jobs <= 0) return omp_get_max_threads();
    return jobs;
#else
    (void)jobs;
    return 1;
#endif
}

/** Index-parallel loop. jobs==1 runs the plain serial loop; otherwise OpenMP
    threads split the range. The first exception thrown by any iteration is
    rethrown after the region joins. */
template <class F>
void parallel_for(size_t n, int jobs, F&& fn) {
    jobs = effective_jobs(jobs);
    if (jobs == 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
#ifdef _OPENMP
    std::exception_ptr first;
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            fn(static_cast<size_t>(i));
        } catch (...) {
#pragma omp critical(lll_parallel_for_err)
            if (!first) first = std::current_exception();
        }
    }
    if (first) std::rethrow_exception(first);
#else
    for (size_t i = 0; i < n; ++i) fn(i);
#endif
}

} // namespace lll

#endif
