#include "maxident/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "maxident/rng.hpp"

namespace maxident {

namespace {

constexpr double kRectangleTol = -1e-10;
constexpr double kBoundaryTol = 1e-6;
constexpr double kEdgeProb = 1e-9;  // quantile level standing in for an
                                    // unbounded support endpoint

// Lattice node j of m for one marginal: support endpoints when finite,
// extreme quantiles otherwise, interior quantiles in between.
double axis_node(const Distribution& d, std::size_t j, std::size_t m) {
  const Support& s = d.support();
  if (j == 0) return std::isfinite(s.lower) ? s.lower : d.quantile(kEdgeProb);
  if (j + 1 == m)
    return std::isfinite(s.upper) ? s.upper : d.quantile(1.0 - kEdgeProb);
  double p = static_cast<double>(j) / static_cast<double>(m - 1);
  return d.quantile(p);
}

double clamp_index(const std::vector<double>& axis, double x, std::size_t& i,
                   double& w) {
  if (x <= axis.front()) {
    i = 0;
    w = 0.0;
    return axis.front();
  }
  if (x >= axis.back()) {
    i = axis.size() - 2;
    w = 1.0;
    return axis.back();
  }
  auto it = std::upper_bound(axis.begin(), axis.end(), x);
  i = static_cast<std::size_t>(it - axis.begin()) - 1;
  w = (x - axis[i]) / (axis[i + 1] - axis[i]);
  return x;
}

}  // namespace

GeneratorSpec GeneratorSpec::constant_one() {
  GeneratorSpec g;
  g.family_ = Family::constant_one;
  return g;
}

GeneratorSpec GeneratorSpec::fgm(double alpha) {
  if (!std::isfinite(alpha))
    throw std::invalid_argument("generator: fgm alpha must be finite");
  GeneratorSpec g;
  g.family_ = Family::fgm;
  g.alpha_ = alpha;
  return g;
}

GeneratorSpec GeneratorSpec::tabulated4d(
    std::array<std::vector<double>, 4> axes, std::vector<double> values) {
  std::size_t total = 1;
  for (const auto& axis : axes) {
    if (axis.size() < 2)
      throw std::invalid_argument("generator: each axis needs >= 2 nodes");
    for (std::size_t i = 0; i < axis.size(); ++i) {
      if (!std::isfinite(axis[i]))
        throw std::invalid_argument("generator: non-finite axis node");
      if (i > 0 && !(axis[i] > axis[i - 1]))
        throw std::invalid_argument(
            "generator: axis nodes must be strictly increasing");
    }
    total *= axis.size();
  }
  if (values.size() != total)
    throw std::invalid_argument("generator: values size must match grid");
  for (double v : values)
    if (!std::isfinite(v))
      throw std::invalid_argument("generator: non-finite table value");
  GeneratorSpec g;
  g.family_ = Family::tabulated4d;
  g.axes_ = std::move(axes);
  g.values_ = std::move(values);
  return g;
}

double beta_eval(const GeneratorSpec& gen, const Marginals4& marginals,
                 double x1, double x2, double x3, double x4) {
  switch (gen.family()) {
    case GeneratorSpec::Family::constant_one:
      return 1.0;
    case GeneratorSpec::Family::fgm: {
      double prod = (1.0 - marginals[0].cdf(x1)) * (1.0 - marginals[1].cdf(x2)) *
                    (1.0 - marginals[2].cdf(x3)) * (1.0 - marginals[3].cdf(x4));
      return 1.0 + gen.alpha() * prod;
    }
    case GeneratorSpec::Family::tabulated4d: {
      const auto& axes = gen.axes();
      std::array<std::size_t, 4> idx{};
      std::array<double, 4> w{};
      const std::array<double, 4> x{x1, x2, x3, x4};
      for (int k = 0; k < 4; ++k) clamp_index(axes[k], x[k], idx[k], w[k]);
      std::array<std::size_t, 4> stride{};
      stride[3] = 1;
      for (int k = 2; k >= 0; --k) stride[k] = stride[k + 1] * axes[k + 1].size();
      double acc = 0.0;
      for (unsigned corner = 0; corner < 16; ++corner) {
        double weight = 1.0;
        std::size_t flat = 0;
        for (int k = 0; k < 4; ++k) {
          bool hi = (corner >> k) & 1u;
          weight *= hi ? w[k] : (1.0 - w[k]);
          flat += (idx[k] + (hi ? 1 : 0)) * stride[k];
        }
        acc += weight * gen.values()[flat];
      }
      return acc;
    }
  }
  return 1.0;
}

GeneratorValidation validate_generator(const GeneratorSpec& gen,
                                       const Marginals4& marginals,
                                       std::size_t points_per_axis,
                                       Exec exec) {
  if (points_per_axis < 2)
    throw std::invalid_argument("validate_generator: need >= 2 points per axis");
  const std::size_t m = points_per_axis;

  std::array<std::vector<double>, 4> nodes;
  for (int k = 0; k < 4; ++k) {
    nodes[k].resize(m);
    for (std::size_t j = 0; j < m; ++j) nodes[k][j] = axis_node(marginals[k], j, m);
  }

  auto point_at = [&](std::size_t flat, std::size_t per_axis) {
    std::array<std::size_t, 4> idx{};
    for (int k = 3; k >= 0; --k) {
      idx[k] = flat % per_axis;
      flat /= per_axis;
    }
    return idx;
  };

  GeneratorValidation report;
  report.points_per_axis = m;

  // Pure elementwise evaluation; the argmin/argmax scan stays serial so the
  // witness does not depend on thread count.
  const std::size_t total = m * m * m * m;
  std::vector<double> beta(total);
  for_each_index(total, exec, [&](std::size_t flat) {
    auto idx = point_at(flat, m);
    beta[flat] = beta_eval(gen, marginals, nodes[0][idx[0]], nodes[1][idx[1]],
                           nodes[2][idx[2]], nodes[3][idx[3]]);
  });

  std::size_t arg_min = 0, arg_max = 0;
  for (std::size_t flat = 1; flat < total; ++flat) {
    if (beta[flat] < beta[arg_min]) arg_min = flat;
    if (beta[flat] > beta[arg_max]) arg_max = flat;
  }
  report.beta_min = beta[arg_min];
  report.beta_max = beta[arg_max];
  auto lo_idx = point_at(arg_min, m);
  auto hi_idx = point_at(arg_max, m);
  for (int k = 0; k < 4; ++k) {
    report.beta_min_point[k] = nodes[k][lo_idx[k]];
    report.beta_max_point[k] = nodes[k][hi_idx[k]];
  }
  report.range_ok = report.beta_min > 0.0 && report.beta_max <= 1.0 + 1e-12;

  // Boundary probes: one coordinate at the top node, the rest at the median;
  // plus the all-top corner.
  double worst = 0.0;
  std::size_t mid = m / 2;
  for (int probe = 0; probe <= 4; ++probe) {
    std::array<double, 4> x{};
    for (int k = 0; k < 4; ++k)
      x[k] = (probe == 4 || probe == k) ? nodes[k][m - 1] : nodes[k][mid];
    double b = beta_eval(gen, marginals, x[0], x[1], x[2], x[3]);
    worst = std::max(worst, std::abs(b - 1.0));
  }
  report.boundary_worst = worst;
  report.boundary_ok = worst <= kBoundaryTol;

  // Cell masses of H = F1 F2 F3 F4 beta via 16-corner alternating sums.
  auto joint = [&](const std::array<std::size_t, 4>& idx) {
    double h = 1.0;
    for (int k = 0; k < 4; ++k) h *= marginals[k].cdf(nodes[k][idx[k]]);
    return h * beta_eval(gen, marginals, nodes[0][idx[0]], nodes[1][idx[1]],
                         nodes[2][idx[2]], nodes[3][idx[3]]);
  };
  const std::size_t cells_per_axis = m - 1;
  const std::size_t cells =
      cells_per_axis * cells_per_axis * cells_per_axis * cells_per_axis;
  std::vector<double> mass(cells);
  for_each_index(cells, exec, [&](std::size_t flat) {
    auto base = point_at(flat, cells_per_axis);
    double acc = 0.0;
    for (unsigned corner = 0; corner < 16; ++corner) {
      std::array<std::size_t, 4> idx = base;
      int ones = 0;
      for (int k = 0; k < 4; ++k) {
        if ((corner >> k) & 1u) {
          ++idx[k];
          ++ones;
        }
      }
      acc += ((4 - ones) % 2 == 0 ? 1.0 : -1.0) * joint(idx);
    }
    mass[flat] = acc;
  });

  std::size_t arg_worst = 0;
  for (std::size_t flat = 1; flat < cells; ++flat)
    if (mass[flat] < mass[arg_worst]) arg_worst = flat;
  report.min_rectangle_mass = mass[arg_worst];
  auto cell_idx = point_at(arg_worst, cells_per_axis);
  for (int k = 0; k < 4; ++k)
    report.worst_rectangle_corner[k] = nodes[k][cell_idx[k]];
  report.rectangles_ok = report.min_rectangle_mass >= kRectangleTol;

  report.passed = report.range_ok && report.boundary_ok && report.rectangles_ok;
  return report;
}

std::vector<std::array<double, 4>> sample_maxind(const GeneratorSpec& gen,
                                                 const Marginals4& marginals,
                                                 std::size_t n,
                                                 std::uint64_t seed,
                                                 Exec exec) {
  if (n == 0) throw std::invalid_argument("sample_maxind: n must be >= 1");
  if (gen.family() == GeneratorSpec::Family::tabulated4d)
    throw std::invalid_argument(
        "sample_maxind: tabulated generators have no sampler");

  std::vector<std::array<double, 4>> out(n);

  if (gen.family() == GeneratorSpec::Family::constant_one) {
    for_each_index(n, exec, [&](std::size_t i) {
      for (std::uint64_t k = 0; k < 4; ++k)
        out[i][k] = marginals[k].quantile(rng::uniform_open(seed, k, i));
    });
    return out;
  }

  const double alpha = gen.alpha();
  if (!(alpha > -1.0 && alpha <= 0.0))
    throw std::invalid_argument("sample_maxind: fgm alpha must lie in (-1, 0]");
  const double envelope = 1.0 + std::abs(alpha);

  bool stuck = false;  // set only, never cleared: benign under concurrency
  for_each_index(n, exec, [&](std::size_t i) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      if (attempt == 1u << 20) {
        stuck = true;
        out[i] = {0, 0, 0, 0};
        break;
      }
      std::array<double, 4> u;
      for (std::uint64_t k = 0; k < 4; ++k)
        u[k] = rng::uniform_open(seed, 5 * attempt + k, i);
      double prod = (1.0 - 2.0 * u[0]) * (1.0 - 2.0 * u[1]) *
                    (1.0 - 2.0 * u[2]) * (1.0 - 2.0 * u[3]);
      double accept = (1.0 + alpha * prod) / envelope;
      if (rng::uniform_open(seed, 5 * attempt + 4, i) <= accept) {
        for (int k = 0; k < 4; ++k) out[i][k] = marginals[k].quantile(u[k]);
        break;
      }
    }
  });
  if (stuck) throw std::runtime_error("sample_maxind: rejection loop stuck");
  return out;
}

}  // namespace maxident
