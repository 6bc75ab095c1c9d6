#pragma once

#include <cstddef>
#include <cstdint>

#ifdef CLME_HAVE_OPENMP
#include <omp.h>
#endif

namespace clme {

/// Thread count for grid loops. Only pointwise work is parallelized;
/// reductions always run serially so results do not depend on this value.
void set_thread_count(int n);
int thread_count();

/// Calls f(i) for i in [0, n). Iterations must be independent.
template <class F>
void parallel_for(std::size_t n, F&& f) {
#ifdef CLME_HAVE_OPENMP
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (std::int64_t i = 0; i < count; ++i) f(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < n; ++i) f(i);
#endif
}

}  // namespace clme
