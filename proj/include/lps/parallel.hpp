#pragma once

// Data-parallel loop helpers. Every parallel kernel in the library writes
// one output slot per index; reductions over those slots happen serially
// afterwards in index order. That keeps results bit-identical between
// Execution::serial and Execution::parallel and across thread counts.

#include <cstddef>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace lps {

enum class Execution { serial, parallel };

inline int max_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <typename F>
void for_each_index(Execution exec, std::ptrdiff_t count, F&& f) {
    if (exec == Execution::parallel && count > 1) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < count; ++i) f(i);
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i) f(i);
    }
}

/// Same as for_each_index but with a static schedule, for cheap uniform
/// iterations where dynamic dispatch overhead dominates.
template <typename F>
void for_each_index_static(Execution exec, std::ptrdiff_t count, F&& f) {
    if (exec == Execution::parallel && count > 1) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i) f(i);
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i) f(i);
    }
}

}  // namespace lps
