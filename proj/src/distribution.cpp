#include "maxident/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "maxident/rng.hpp"

namespace maxident {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": parameter must be finite");
}

}  // namespace

Distribution Distribution::exponential(double rate) {
  require_finite(rate, "exponential");
  if (rate <= 0) throw std::invalid_argument("exponential: rate must be > 0");
  Distribution d;
  d.family_ = Family::exponential;
  d.support_ = Support(0.0, kInf, false, false);
  d.smooth_ = true;
  d.p1_ = rate;
  return d;
}

Distribution Distribution::uniform(double lo, double hi) {
  require_finite(lo, "uniform");
  require_finite(hi, "uniform");
  if (!(lo < hi)) throw std::invalid_argument("uniform: need lo < hi");
  Distribution d;
  d.family_ = Family::uniform;
  d.support_ = Support(lo, hi, true, true);
  d.smooth_ = true;
  d.p1_ = lo;
  d.p2_ = hi;
  return d;
}

Distribution Distribution::weibull(double shape, double scale) {
  require_finite(shape, "weibull");
  require_finite(scale, "weibull");
  if (shape <= 0 || scale <= 0) throw std::invalid_argument("weibull: shape and scale must be > 0");
  Distribution d;
  d.family_ = Family::weibull;
  d.support_ = Support(0.0, kInf, false, false);
  d.smooth_ = true;
  d.p1_ = shape;
  d.p2_ = scale;
  return d;
}

Distribution Distribution::frechet(double shape, double scale) {
  require_finite(shape, "frechet");
  require_finite(scale, "frechet");
  if (shape <= 0 || scale <= 0) throw std::invalid_argument("frechet: shape and scale must be > 0");
  Distribution d;
  d.family_ = Family::frechet;
  d.support_ = Support(0.0, kInf, false, false);
  d.smooth_ = true;
  d.p1_ = shape;
  d.p2_ = scale;
  return d;
}

Distribution Distribution::tabulated(std::vector<double> nodes,
                                     std::vector<double> values) {
  if (nodes.size() < 2) throw std::invalid_argument("tabulated: need at least two nodes");
  Support hull(nodes.front(), nodes.back(), true, true);
  return tabulated(std::move(nodes), std::move(values), hull);
}

Distribution Distribution::tabulated(std::vector<double> nodes,
                                     std::vector<double> values,
                                     Support support) {
  if (nodes.size() < 2) throw std::invalid_argument("tabulated: need at least two nodes");
  if (nodes.size() != values.size())
    throw std::invalid_argument("tabulated: nodes/values size mismatch");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i])) throw std::invalid_argument("tabulated: non-finite node");
    if (!std::isfinite(values[i]) || values[i] < 0.0 || values[i] > 1.0)
      throw std::invalid_argument("tabulated: values must lie in [0,1]");
    if (i > 0 && !(nodes[i] > nodes[i - 1]))
      throw std::invalid_argument("tabulated: nodes must be strictly increasing");
    if (i > 0 && values[i] < values[i - 1])
      throw std::invalid_argument("tabulated: values must be nondecreasing");
  }
  if (support.lower > nodes.front() || support.upper < nodes.back())
    throw std::invalid_argument("tabulated: support must contain the node hull");
  Distribution d;
  d.family_ = Family::tabulated;
  d.support_ = support;
  d.smooth_ = false;
  d.nodes_ = std::move(nodes);
  d.values_ = std::move(values);
  return d;
}

Distribution Distribution::empirical(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("empirical: need at least one sample");
  for (double x : samples)
    if (!std::isfinite(x)) throw std::invalid_argument("empirical: non-finite sample");
  std::sort(samples.begin(), samples.end());
  Distribution d;
  d.family_ = Family::empirical;
  d.smooth_ = false;
  if (samples.front() < samples.back()) {
    d.support_ = Support(samples.front(), samples.back(), true, true);
  } else {
    // Point mass: widen a degenerate interval so the Support invariant holds.
    double x = samples.front();
    double eps = std::max(1.0, std::abs(x)) * 1e-12;
    d.support_ = Support(x - eps, x + eps, true, true);
  }
  d.nodes_ = std::move(samples);
  return d;
}

Distribution Distribution::point_mass(double x) { return empirical({x}); }

double Distribution::cdf(double t) const {
  if (std::isnan(t)) throw std::invalid_argument("cdf: NaN argument");
  switch (family_) {
    case Family::exponential:
      return t <= 0.0 ? 0.0 : -std::expm1(-p1_ * t);
    case Family::uniform:
      if (t <= p1_) return 0.0;
      if (t >= p2_) return 1.0;
      return (t - p1_) / (p2_ - p1_);
    case Family::weibull:
      return t <= 0.0 ? 0.0 : -std::expm1(-std::pow(t / p2_, p1_));
    case Family::frechet:
      return t <= 0.0 ? 0.0 : std::exp(-std::pow(t / p2_, -p1_));
    case Family::tabulated: {
      if (t < support_.lower) return 0.0;
      if (t <= nodes_.front()) {
        // Below the hull: truncated tables extend flat, hull-supported
        // tables are zero strictly below the first node.
        if (t < nodes_.front() && support_.lower == nodes_.front()) return 0.0;
        return values_.front();
      }
      if (t >= nodes_.back()) return values_.back();
      auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
      std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
      double x0 = nodes_[i - 1], x1 = nodes_[i];
      double y0 = values_[i - 1], y1 = values_[i];
      return y0 + (y1 - y0) * ((t - x0) / (x1 - x0));
    }
    case Family::empirical: {
      auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
      return static_cast<double>(it - nodes_.begin()) /
             static_cast<double>(nodes_.size());
    }
  }
  return 0.0;
}

double Distribution::cdf_left(double t) const {
  if (std::isnan(t)) throw std::invalid_argument("cdf_left: NaN argument");
  switch (family_) {
    case Family::empirical: {
      auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
      return static_cast<double>(it - nodes_.begin()) /
             static_cast<double>(nodes_.size());
    }
    case Family::tabulated:
      // Piecewise linear is continuous except for a possible jump at the
      // support's lower endpoint.
      if (t <= support_.lower) return 0.0;
      return cdf(t);
    default:
      return cdf(t);
  }
}

double Distribution::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("quantile: p must lie in (0,1)");
  switch (family_) {
    case Family::exponential:
      return -std::log1p(-p) / p1_;
    case Family::uniform:
      return p1_ + p * (p2_ - p1_);
    case Family::weibull:
      return p2_ * std::pow(-std::log1p(-p), 1.0 / p1_);
    case Family::frechet:
      return p2_ * std::pow(-std::log(p), -1.0 / p1_);
    case Family::tabulated: {
      if (p <= values_.front()) return nodes_.front();
      if (p > values_.back()) return nodes_.back();  // truncated table
      auto it = std::lower_bound(values_.begin(), values_.end(), p);
      std::size_t i = static_cast<std::size_t>(it - values_.begin());
      double y0 = values_[i - 1], y1 = values_[i];
      double x0 = nodes_[i - 1], x1 = nodes_[i];
      return x0 + (x1 - x0) * ((p - y0) / (y1 - y0));
    }
    case Family::empirical: {
      std::size_t n = nodes_.size();
      std::size_t k = static_cast<std::size_t>(
          std::ceil(p * static_cast<double>(n)));
      if (k == 0) k = 1;
      if (k > n) k = n;
      return nodes_[k - 1];
    }
  }
  return 0.0;
}

std::vector<double> sample(const Distribution& d, std::size_t n,
                           std::uint64_t seed, std::uint64_t stream,
                           Exec exec) {
  if (n == 0) throw std::invalid_argument("sample: n must be >= 1");
  std::vector<double> out(n);
  for_each_index(n, exec, [&](std::size_t i) {
    out[i] = d.quantile(rng::uniform_open(seed, stream, i));
  });
  return out;
}

Distribution empirical_cdf(std::vector<double> samples) {
  return Distribution::empirical(std::move(samples));
}

double sup_distance(const Distribution& f, const Distribution& g,
                    std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("sup_distance: empty grid");
  double best = 0.0;
  for (double t : grid) best = std::max(best, std::abs(f.cdf(t) - g.cdf(t)));
  return best;
}

}  // namespace maxident
