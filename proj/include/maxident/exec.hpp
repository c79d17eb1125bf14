#pragma once

#include <cstddef>

namespace maxident {

// Execution policy for the data-parallel kernels. Every parallel loop in this
// library writes each output element as a pure function of its index, so the
// parallel path is bit-identical to the serial one regardless of thread count
// or schedule. The serial path is kept as the reference implementation; tests
// compare the two and the bench target measures them against each other.
enum class Exec { serial, parallel };

template <class F>
void for_each_index(std::size_t n, Exec exec, F&& body) {
#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      body(static_cast<std::size_t>(i));
    }
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace maxident
