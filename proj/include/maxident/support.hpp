#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace maxident {

// Interval on which a CDF rises from 0 to 1. Only interval supports are
// representable; disconnected supports are out of scope.
struct Support {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool lower_closed = false;
  bool upper_closed = false;

  Support() = default;
  Support(double lo, double hi, bool lo_closed, bool hi_closed)
      : lower(lo), upper(hi), lower_closed(lo_closed), upper_closed(hi_closed) {
    if (std::isnan(lower) || std::isnan(upper))
      throw std::invalid_argument("Support: NaN endpoint");
    if (!(lower < upper))
      throw std::invalid_argument("Support: lower must be < upper");
    if (std::isinf(lower) && lower_closed)
      throw std::invalid_argument("Support: -inf endpoint cannot be closed");
    if (std::isinf(upper) && upper_closed)
      throw std::invalid_argument("Support: +inf endpoint cannot be closed");
  }

  bool contains(double t) const {
    if (t < lower || (t == lower && !lower_closed)) return false;
    if (t > upper || (t == upper && !upper_closed)) return false;
    return true;
  }

  friend bool operator==(const Support&, const Support&) = default;
};

// Endpoint comparison with tolerance; infinite endpoints must match exactly.
// Closedness flags are ignored: the identification theory cares about the
// common interval, not its boundary membership.
inline bool same_interval(const Support& a, const Support& b,
                          double tol = 1e-9) {
  auto close = [tol](double x, double y) {
    if (std::isinf(x) || std::isinf(y)) return x == y;
    return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
  };
  return close(a.lower, b.lower) && close(a.upper, b.upper);
}

}  // namespace maxident
