#include "maxident/isotonic.hpp"

#include <algorithm>
#include <cstddef>

namespace maxident {

void isotonic_increasing(std::vector<double>& y) {
  const std::size_t n = y.size();
  if (n < 2) return;
  // Stack of merged blocks: (mean, count).
  std::vector<double> mean(n);
  std::vector<std::size_t> count(n);
  std::size_t top = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mean[top] = y[i];
    count[top] = 1;
    while (top > 0 && mean[top - 1] > mean[top]) {
      double total = static_cast<double>(count[top - 1] + count[top]);
      mean[top - 1] =
          (mean[top - 1] * static_cast<double>(count[top - 1]) +
           mean[top] * static_cast<double>(count[top])) /
          total;
      count[top - 1] += count[top];
      --top;
    }
    ++top;
  }
  std::size_t i = 0;
  for (std::size_t b = 0; b < top; ++b)
    for (std::size_t k = 0; k < count[b]; ++k) y[i++] = mean[b];
}

void isotonic_increasing_clamped(std::vector<double>& y, double lo,
                                 double hi) {
  isotonic_increasing(y);
  for (double& v : y) v = std::clamp(v, lo, hi);
}

}  // namespace maxident
