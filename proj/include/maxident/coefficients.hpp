#pragma once

#include <cmath>
#include <stdexcept>

namespace maxident {

enum class Regime { all_positive, mixed_sign };

// Known scale constants of the observation maps
//   U = max(X, a Z1, b Z2),  V = max(Y, c Z1, d Z2).
// Two sign regimes are supported: all four positive, or a>0, b<0, c>0, d<0.
struct ScaleCoefficients {
  double a = 1.0, b = 1.0, c = 1.0, d = 1.0;
  Regime regime = Regime::all_positive;

  static ScaleCoefficients all_positive(double a, double b, double c,
                                        double d) {
    check_finite(a, b, c, d);
    if (!(a > 0 && b > 0 && c > 0 && d > 0))
      throw std::invalid_argument(
          "coefficients: all_positive regime requires a,b,c,d > 0");
    return {a, b, c, d, Regime::all_positive};
  }

  static ScaleCoefficients mixed_sign(double a, double b, double c, double d) {
    check_finite(a, b, c, d);
    if (!(a > 0 && b < 0 && c > 0 && d < 0))
      throw std::invalid_argument(
          "coefficients: mixed_sign regime requires a>0, b<0, c>0, d<0");
    return {a, b, c, d, Regime::mixed_sign};
  }

  // Pick the regime from the signs; any other sign pattern is rejected.
  static ScaleCoefficients infer(double a, double b, double c, double d) {
    check_finite(a, b, c, d);
    if (a > 0 && b > 0 && c > 0 && d > 0) return all_positive(a, b, c, d);
    if (a > 0 && b < 0 && c > 0 && d < 0) return mixed_sign(a, b, c, d);
    throw std::invalid_argument(
        "coefficients: sign pattern must be all positive or (+,-,+,-)");
  }

  // Ratio lambda = a/b driving the antiperiodic equation.
  double lambda() const { return a / b; }

  friend bool operator==(const ScaleCoefficients&,
                         const ScaleCoefficients&) = default;

 private:
  static void check_finite(double a, double b, double c, double d) {
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) &&
          std::isfinite(d)))
      throw std::invalid_argument("coefficients: values must be finite");
    if (a == 0 || b == 0 || c == 0 || d == 0)
      throw std::invalid_argument("coefficients: values must be nonzero");
  }
};

}  // namespace maxident
