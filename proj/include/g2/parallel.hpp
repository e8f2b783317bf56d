#pragma once

// Thread-count control for the data-parallel kernels.  Every kernel ships in
// a serial reference variant and an OpenMP variant; parallel_for dispatches
// on the configured thread count (1 = serial reference path).

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace g2 {

inline int& thread_count() {
    static int n = 1;
    return n;
}

inline void set_threads(int n) { thread_count() = n > 0 ? n : 1; }

template <class Fn>
inline void serial_for(std::ptrdiff_t n, Fn&& fn) {
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
}

template <class Fn>
inline void omp_for(std::ptrdiff_t n, Fn&& fn, int threads) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
#else
    (void)threads;
    serial_for(n, fn);
#endif
}

// Node bodies must write to disjoint outputs; with that contract the result
// is identical for every thread count.
template <class Fn>
inline void parallel_for(std::ptrdiff_t n, Fn&& fn) {
    int t = thread_count();
    if (t <= 1)
        serial_for(n, fn);
    else
        omp_for(n, fn, t);
}

} // namespace g2
