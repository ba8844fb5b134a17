#pragma once
#include <cstddef>
#include <vector>

#include <omp.h>

namespace rgeo {

// Data-parallel map over [0, n): out[i] = f(i).  All sweep kernels funnel
// through here; results are stored per-index so reductions done afterwards
// are independent of the schedule and thread count.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
    std::vector<T> out(n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    return out;
}

// Serial reference implementation, kept for testing and benchmarking.
template <class T, class F>
std::vector<T> serial_map(std::size_t n, F&& f) {
    std::vector<T> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
}

inline int max_threads() { return omp_get_max_threads(); }
inline void set_threads(int n) {
    if (n > 0) omp_set_num_threads(n);
}

}  // namespace rgeo
