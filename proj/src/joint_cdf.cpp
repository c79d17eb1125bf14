#include "maxident/joint_cdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "maxident/rng.hpp"

namespace maxident {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

double joint_cdf_positive(const ComponentSystem& system,
                          const ScaleCoefficients& coeffs, double t1,
                          double t2) {
  require(coeffs.regime == Regime::all_positive,
          "joint_cdf_positive: coefficients must be all-positive");
  require(system.dependence() == Dependence::independent,
          "joint_cdf_positive: system must be independent");
  double m1 = std::min(t1 / coeffs.a, t2 / coeffs.c);
  double m2 = std::min(t1 / coeffs.b, t2 / coeffs.d);
  return system.fx().cdf(t1) * system.fy().cdf(t2) * system.fz1().cdf(m1) *
         system.fz1().cdf(m2);
}

double joint_cdf_mixed(const ComponentSystem& system,
                       const ScaleCoefficients& coeffs, double t1, double t2) {
  require(coeffs.regime == Regime::mixed_sign,
          "joint_cdf_mixed: coefficients must be mixed-sign");
  require(system.dependence() == Dependence::independent,
          "joint_cdf_mixed: system must be independent");
  double m1 = std::min(t1 / coeffs.a, t2 / coeffs.c);
  double s = std::max(t1 / coeffs.b, t2 / coeffs.d);
  return system.fx().cdf(t1) * system.fy().cdf(t2) * system.fz1().cdf(m1) *
         (1.0 - system.fz1().cdf_left(s));
}

double joint_cdf_maxind(const ComponentSystem& system,
                        const ScaleCoefficients& coeffs, double t1,
                        double t2) {
  require(coeffs.regime == Regime::all_positive,
          "joint_cdf_maxind: coefficients must be all-positive");
  require(system.dependence() == Dependence::max_independent,
          "joint_cdf_maxind: system must be max-independent");
  double m1 = std::min(t1 / coeffs.a, t2 / coeffs.c);
  double m2 = std::min(t1 / coeffs.b, t2 / coeffs.d);
  Marginals4 q = system.quadruple();
  return system.fx().cdf(t1) * system.fy().cdf(t2) * system.fz1().cdf(m1) *
         system.fz1().cdf(m2) * beta_eval(system.generator(), q, t1, t2, m1, m2);
}

double joint_cdf_kotlarski(const Distribution& f0, const Distribution& f1,
                           const Distribution& f2, double t1, double t2) {
  return f1.cdf(t1) * f2.cdf(t2) * f0.cdf(std::min(t1, t2));
}

double joint_cdf_auto(const ComponentSystem& system,
                      const ScaleCoefficients& coeffs, double t1, double t2) {
  if (system.dependence() == Dependence::max_independent)
    return joint_cdf_maxind(system, coeffs, t1, t2);
  return coeffs.regime == Regime::all_positive
             ? joint_cdf_positive(system, coeffs, t1, t2)
             : joint_cdf_mixed(system, coeffs, t1, t2);
}

double marginal_u(const ComponentSystem& system,
                  const ScaleCoefficients& coeffs, double t) {
  return joint_cdf_auto(system, coeffs, t, kInf);
}

double marginal_v(const ComponentSystem& system,
                  const ScaleCoefficients& coeffs, double t) {
  return joint_cdf_auto(system, coeffs, kInf, t);
}

std::vector<std::pair<double, double>> sample_joint(
    const ComponentSystem& system, const ScaleCoefficients& coeffs,
    std::size_t n, std::uint64_t seed, Exec exec) {
  if (n == 0) throw std::invalid_argument("sample_joint: n must be >= 1");
  std::vector<std::pair<double, double>> out(n);
  auto fold = [&](std::size_t i, double x, double y, double z1, double z2) {
    out[i] = {std::max({x, coeffs.a * z1, coeffs.b * z2}),
              std::max({y, coeffs.c * z1, coeffs.d * z2})};
  };
  if (system.dependence() == Dependence::independent) {
    for_each_index(n, exec, [&](std::size_t i) {
      double x = system.fx().quantile(rng::uniform_open(seed, 0, i));
      double y = system.fy().quantile(rng::uniform_open(seed, 1, i));
      double z1 = system.fz1().quantile(rng::uniform_open(seed, 2, i));
      double z2 = system.fz1().quantile(rng::uniform_open(seed, 3, i));
      fold(i, x, y, z1, z2);
    });
    return out;
  }
  auto tuples = sample_maxind(system.generator(), system.quadruple(), n, seed,
                              exec);
  for_each_index(n, exec, [&](std::size_t i) {
    fold(i, tuples[i][0], tuples[i][1], tuples[i][2], tuples[i][3]);
  });
  return out;
}

std::vector<std::pair<double, double>> sample_kotlarski(
    const Distribution& f0, const Distribution& f1, const Distribution& f2,
    std::size_t n, std::uint64_t seed, Exec exec) {
  if (n == 0) throw std::invalid_argument("sample_kotlarski: n must be >= 1");
  std::vector<std::pair<double, double>> out(n);
  for_each_index(n, exec, [&](std::size_t i) {
    double x0 = f0.quantile(rng::uniform_open(seed, 0, i));
    double x1 = f1.quantile(rng::uniform_open(seed, 1, i));
    double x2 = f2.quantile(rng::uniform_open(seed, 2, i));
    out[i] = {std::max(x0, x1), std::max(x0, x2)};
  });
  return out;
}

JointCdf2D JointCdf2D::analytic(ComponentSystem system,
                                ScaleCoefficients coeffs) {
  if (system.dependence() == Dependence::max_independent &&
      coeffs.regime != Regime::all_positive)
    throw std::invalid_argument(
        "joint cdf: max-independent systems require all-positive "
        "coefficients");
  JointCdf2D g;
  g.kind_ = Kind::analytic;
  g.system_ = std::move(system);
  g.coeffs_ = coeffs;
  return g;
}

JointCdf2D JointCdf2D::kotlarski(Distribution f0, Distribution f1,
                                 Distribution f2) {
  if (!same_interval(f0.support(), f1.support()) ||
      !same_interval(f0.support(), f2.support()))
    throw std::invalid_argument(
        "joint cdf: kotlarski components must share support");
  JointCdf2D g;
  g.kind_ = Kind::kotlarski;
  g.kot_ = {std::move(f0), std::move(f1), std::move(f2)};
  return g;
}

JointCdf2D JointCdf2D::empirical(
    std::vector<std::pair<double, double>> pairs) {
  if (pairs.empty())
    throw std::invalid_argument("joint cdf: need at least one pair");
  for (const auto& [u, v] : pairs)
    if (!std::isfinite(u) || !std::isfinite(v))
      throw std::invalid_argument("joint cdf: non-finite sample pair");
  std::sort(pairs.begin(), pairs.end());
  JointCdf2D g;
  g.kind_ = Kind::empirical;
  g.u_.reserve(pairs.size());
  g.v_.reserve(pairs.size());
  for (const auto& [u, v] : pairs) {
    g.u_.push_back(u);
    g.v_.push_back(v);
  }
  return g;
}

JointCdf2D JointCdf2D::tabulated(std::vector<double> t1,
                                 std::vector<double> t2,
                                 std::vector<double> values) {
  if (t1.size() < 2 || t2.size() < 2)
    throw std::invalid_argument("joint cdf: need >= 2 nodes per axis");
  auto check_axis = [](const std::vector<double>& axis) {
    for (std::size_t i = 0; i < axis.size(); ++i) {
      if (!std::isfinite(axis[i]))
        throw std::invalid_argument("joint cdf: non-finite grid node");
      if (i > 0 && !(axis[i] > axis[i - 1]))
        throw std::invalid_argument(
            "joint cdf: grid nodes must be strictly increasing");
    }
  };
  check_axis(t1);
  check_axis(t2);
  if (values.size() != t1.size() * t2.size())
    throw std::invalid_argument("joint cdf: values size must match grid");
  const std::size_t n2 = t2.size();
  for (std::size_t i = 0; i < t1.size(); ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      double v = values[i * n2 + j];
      if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw std::invalid_argument("joint cdf: values must lie in [0,1]");
      if (i > 0 && v < values[(i - 1) * n2 + j] - 1e-9)
        throw std::invalid_argument(
            "joint cdf: values must be nondecreasing in t1");
      if (j > 0 && v < values[i * n2 + j - 1] - 1e-9)
        throw std::invalid_argument(
            "joint cdf: values must be nondecreasing in t2");
    }
  }
  JointCdf2D g;
  g.kind_ = Kind::tabulated;
  g.t1_ = std::move(t1);
  g.t2_ = std::move(t2);
  g.values_ = std::move(values);
  return g;
}

double JointCdf2D::eval(double t1, double t2) const {
  if (std::isnan(t1) || std::isnan(t2))
    throw std::invalid_argument("joint cdf: NaN argument");
  switch (kind_) {
    case Kind::analytic:
      return joint_cdf_auto(*system_, *coeffs_, t1, t2);
    case Kind::kotlarski:
      return joint_cdf_kotlarski((*kot_)[0], (*kot_)[1], (*kot_)[2], t1, t2);
    case Kind::empirical: {
      auto it = std::upper_bound(u_.begin(), u_.end(), t1);
      std::size_t k = static_cast<std::size_t>(it - u_.begin());
      std::size_t hits = 0;
      for (std::size_t i = 0; i < k; ++i) hits += v_[i] <= t2 ? 1 : 0;
      return static_cast<double>(hits) / static_cast<double>(u_.size());
    }
    case Kind::tabulated: {
      auto locate = [](const std::vector<double>& axis, double x,
                       std::size_t& i, double& w) {
        if (x <= axis.front()) {
          i = 0;
          w = 0.0;
        } else if (x >= axis.back()) {
          i = axis.size() - 2;
          w = 1.0;
        } else {
          auto it = std::upper_bound(axis.begin(), axis.end(), x);
          i = static_cast<std::size_t>(it - axis.begin()) - 1;
          w = (x - axis[i]) / (axis[i + 1] - axis[i]);
        }
      };
      std::size_t i, j;
      double wi, wj;
      locate(t1_, t1, i, wi);
      locate(t2_, t2, j, wj);
      const std::size_t n2 = t2_.size();
      double g00 = values_[i * n2 + j], g01 = values_[i * n2 + j + 1];
      double g10 = values_[(i + 1) * n2 + j], g11 = values_[(i + 1) * n2 + j + 1];
      return (1 - wi) * ((1 - wj) * g00 + wj * g01) +
             wi * ((1 - wj) * g10 + wj * g11);
    }
  }
  return 0.0;
}

std::vector<double> eval_grid(const JointCdf2D& g, std::span<const double> t1s,
                              std::span<const double> t2s, Exec exec) {
  if (t1s.empty() || t2s.empty())
    throw std::invalid_argument("eval_grid: empty grid");
  std::vector<double> out(t1s.size() * t2s.size());
  const std::size_t n2 = t2s.size();
  for_each_index(out.size(), exec, [&](std::size_t flat) {
    out[flat] = g.eval(t1s[flat / n2], t2s[flat % n2]);
  });
  return out;
}

}  // namespace maxident
