#pragma once

#include <cstddef>

#if CYS_HAVE_OPENMP
#include <omp.h>
#endif

namespace cys {

namespace detail {
inline int g_workers = 0;  // 0 = all cores
}

inline int hardware_workers() {
#if CYS_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Worker-count knob shared by all parallel kernels. 0 means "all cores".
// Every kernel in this codebase is written so that its numeric output does
// not depend on the worker count; tests compare against the serial twins.
inline void set_workers(int n) { detail::g_workers = n < 0 ? 0 : n; }

inline int workers() {
    return detail::g_workers > 0 ? detail::g_workers : hardware_workers();
}

template <typename Fn>
void parallel_for(std::ptrdiff_t n, Fn&& fn) {
#if CYS_HAVE_OPENMP
    const int w = workers();
#pragma omp parallel for schedule(static) num_threads(w)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        fn(i);
    }
#else
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        fn(i);
    }
#endif
}

}  // namespace cys
