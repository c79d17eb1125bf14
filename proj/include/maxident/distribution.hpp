#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "maxident/exec.hpp"
#include "maxident/support.hpp"

namespace maxident {

// One-dimensional distribution: a parametric family, a monotone piecewise
// linear table, or an empirical step function. Immutable after construction;
// all evaluation is const and safe to call concurrently.
class Distribution {
 public:
  enum class Family { exponential, uniform, weibull, frechet, tabulated, empirical };

  static Distribution exponential(double rate);
  static Distribution uniform(double lo, double hi);
  static Distribution weibull(double shape, double scale);
  static Distribution frechet(double shape, double scale);

  // Monotone piecewise-linear CDF through (nodes, values). Nodes must be
  // strictly increasing, values nondecreasing in [0,1]. By default the
  // support is the node hull; the explicit-support overload lets a table
  // stand in for a distribution on a wider interval (evaluation clamps to
  // the end values outside the hull).
  static Distribution tabulated(std::vector<double> nodes,
                                std::vector<double> values);
  static Distribution tabulated(std::vector<double> nodes,
                                std::vector<double> values, Support support);

  // Empirical step CDF; samples are copied and sorted.
  static Distribution empirical(std::vector<double> samples);

  // Degenerate distribution: all mass at x (empirical with one sample).
  static Distribution point_mass(double x);

  Family family() const { return family_; }
  const Support& support() const { return support_; }

  // True when the CDF has a continuous derivative on its support interior.
  bool smooth() const { return smooth_; }

  // F(t); 0 below the support, 1 above it.
  double cdf(double t) const;

  // Left limit F(t-). Differs from cdf() only at atoms (empirical family and
  // the lower hull node of a truncated table).
  double cdf_left(double t) const;

  // Generalized inverse inf{t : F(t) >= p}; requires p in (0,1).
  double quantile(double p) const;

  // Parametric parameters (rate / lo,hi / shape,scale); meaningful only for
  // the four parametric families.
  std::pair<double, double> params() const { return {p1_, p2_}; }

  // Tabulated nodes+values, or sorted samples for the empirical family
  // (values() is empty in that case).
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  Distribution() = default;

  Family family_ = Family::exponential;
  Support support_;
  bool smooth_ = true;
  double p1_ = 0.0, p2_ = 0.0;
  std::vector<double> nodes_;   // tabulated nodes or sorted samples
  std::vector<double> values_;  // tabulated CDF values
};

// n inverse-transform draws on the counter-based uniform stream
// (seed, stream, i). Identical (spec, n, seed, stream) give identical output
// for either execution policy. Throws std::invalid_argument when n == 0.
std::vector<double> sample(const Distribution& d, std::size_t n,
                           std::uint64_t seed, std::uint64_t stream = 0,
                           Exec exec = Exec::parallel);

// Empirical CDF spec from raw observations. Throws on empty input.
Distribution empirical_cdf(std::vector<double> samples);

// max over the grid of |F(t) - G(t)|. Throws on empty grid.
double sup_distance(const Distribution& f, const Distribution& g,
                    std::span<const double> grid);

}  // namespace maxident
