#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fitwave {

// Resolves the worker count: explicit value wins, then the FITWAVE_WORKERS
// environment variable, then the OpenMP default. Returns 1 when built
// without OpenMP.
inline int resolve_workers(int requested) {
#ifdef _OPENMP
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FITWAVE_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return omp_get_max_threads();
#else
    (void)requested;
    return 1;
#endif
}

// Runs fn(index) for index in [0, count). workers == 1 is the serial
// reference path; any other value runs the same work OpenMP-parallel.
// Replicates must be independent (each derives its own RNG stream) and must
// write results into per-index slots, which makes output identical across
// worker counts. The first exception thrown by any replicate is rethrown.
template <class Fn>
void for_each_replicate(std::size_t count, int workers, Fn&& fn) {
    const int w = resolve_workers(workers);
    if (w == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
#ifdef _OPENMP
    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(w)
    for (long long i = 0; i < (long long)count; ++i) {
        if (failure) continue;
        try {
            fn((std::size_t)i);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
#else
    for (std::size_t i = 0; i < count; ++i) fn(i);
#endif
}

} // namespace fitwave
