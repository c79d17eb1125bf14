#include "maxident/nonuniqueness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "maxident/joint_cdf.hpp"

namespace maxident {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_mixed(const ScaleCoefficients& coeffs, const char* who) {
  if (coeffs.regime != Regime::mixed_sign)
    throw std::invalid_argument(std::string(who) +
                                ": coefficients must be mixed-sign");
}

void require_grid(std::span<const double> grid, const char* who) {
  if (grid.size() < 2)
    throw std::invalid_argument(std::string(who) + ": need at least two nodes");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]))
      throw std::invalid_argument(std::string(who) + ": nodes must be finite");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument(std::string(who) +
                                  ": nodes must be strictly increasing");
  }
}

// F(t/p) (1 - F((t/q)-)): the marginal factor a Z slot contributes under
// one positive and one negative coefficient.
double slot_factor(const Distribution& f, double t, double p, double q) {
  return f.cdf(t / p) * (1.0 - f.cdf_left(t / q));
}

}  // namespace

RelationReport necessary_relations_check(const ComponentSystem& system_a,
                                         const ComponentSystem& system_b,
                                         const ScaleCoefficients& coeffs,
                                         std::span<const double> grid,
                                         double denominator_floor) {
  require_mixed(coeffs, "necessary_relations_check");
  require_grid(grid, "necessary_relations_check");
  if (!same_interval(system_a.fx().support(), system_b.fx().support()))
    throw std::invalid_argument(
        "necessary_relations_check: systems must share support");
  if (!(denominator_floor > 0.0))
    throw std::invalid_argument(
        "necessary_relations_check: floor must be positive");

  RelationReport out;
  out.nodes.assign(grid.begin(), grid.end());
  out.residual_fx.assign(grid.size(), kNaN);
  out.residual_fy.assign(grid.size(), kNaN);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double t = grid[k];
    double qz_u = slot_factor(system_a.fz1(), t, coeffs.a, coeffs.b);
    double qs_u = slot_factor(system_b.fz1(), t, coeffs.a, coeffs.b);
    if (qz_u > denominator_floor && qs_u > denominator_floor) {
      double r = std::abs(system_a.fx().cdf(t) -
                          system_b.fx().cdf(t) * (qs_u / qz_u));
      out.residual_fx[k] = r;
      out.max_residual_fx = std::max(out.max_residual_fx, r);
    } else {
      ++out.skipped;
    }
    double qz_v = slot_factor(system_a.fz1(), t, coeffs.c, coeffs.d);
    double qs_v = slot_factor(system_b.fz1(), t, coeffs.c, coeffs.d);
    if (qz_v > denominator_floor && qs_v > denominator_floor) {
      double r = std::abs(system_a.fy().cdf(t) -
                          system_b.fy().cdf(t) * (qs_v / qz_v));
      out.residual_fy[k] = r;
      out.max_residual_fy = std::max(out.max_residual_fy, r);
    } else {
      ++out.skipped;
    }
  }
  return out;
}

AlternativeCandidate construct_alternative(const ComponentSystem& system,
                                           const ScaleCoefficients& coeffs,
                                           const Distribution& s1,
                                           std::span<const double> grid,
                                           double equivalence_tolerance,
                                           double denominator_floor,
                                           Exec exec) {
  require_mixed(coeffs, "construct_alternative");
  require_grid(grid, "construct_alternative");
  if (!same_interval(s1.support(), system.fz1().support()))
    throw std::invalid_argument(
        "construct_alternative: s1 must share the system support");
  if (!(denominator_floor > 0.0))
    throw std::invalid_argument("construct_alternative: floor must be positive");

  AlternativeCandidate cand{{}, {}, {}, {}, {}, s1, {}, {}, 0.0};
  for (double t : grid) {
    double qz_u = slot_factor(system.fz1(), t, coeffs.a, coeffs.b);
    double qs_u = slot_factor(s1, t, coeffs.a, coeffs.b);
    double qz_v = slot_factor(system.fz1(), t, coeffs.c, coeffs.d);
    double qs_v = slot_factor(s1, t, coeffs.c, coeffs.d);
    if (qz_u <= denominator_floor || qs_u <= denominator_floor ||
        qz_v <= denominator_floor || qs_v <= denominator_floor)
      continue;
    cand.nodes.push_back(t);
    // Ratio first: an identity trial (s1 == fz1) then multiplies by an
    // exact 1.0 and reproduces F_X, F_Y bit for bit.
    cand.fm_values.push_back(system.fx().cdf(t) * (qz_u / qs_u));
    cand.fn_values.push_back(system.fy().cdf(t) * (qz_v / qs_v));
  }
  if (cand.nodes.size() < 2)
    throw std::invalid_argument(
        "construct_alternative: fewer than two grid nodes above the floor");

  // A quotient table is a CDF candidate only if it stays in [0,1] and never
  // decreases; find the first violation as the witness.
  auto find_violation = [&](const std::vector<double>& v, const char* label) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i]) || v[i] < -1e-12 || v[i] > 1.0 + 1e-9) {
        cand.validity = {false, cand.nodes[i],
                         std::string(label) + " leaves [0,1]"};
        return true;
      }
      if (i > 0 && v[i] < v[i - 1] - 1e-12) {
        cand.validity = {false, cand.nodes[i],
                         std::string(label) + " decreases"};
        return true;
      }
    }
    return false;
  };
  if (find_violation(cand.fm_values, "fm") ||
      find_violation(cand.fn_values, "fn"))
    return cand;

  auto as_cdf = [&](const std::vector<double>& raw,
                    const Support& support) {
    std::vector<double> v = raw;
    for (double& x : v) x = std::clamp(x, 0.0, 1.0);
    for (std::size_t i = 1; i < v.size(); ++i) v[i] = std::max(v[i], v[i - 1]);
    return Distribution::tabulated(cand.nodes, std::move(v), support);
  };
  cand.fm = as_cdf(cand.fm_values, system.fx().support());
  cand.fn = as_cdf(cand.fn_values, system.fy().support());

  ComponentSystem alt = ComponentSystem::independent(*cand.fm, *cand.fn, s1);
  RelationReport rel =
      necessary_relations_check(system, alt, coeffs, cand.nodes,
                                denominator_floor);
  cand.max_relation_residual =
      std::max(rel.max_residual_fx, rel.max_residual_fy);
  cand.equivalence = verify_equal_joint(system, cand, coeffs, cand.nodes,
                                        cand.nodes, equivalence_tolerance,
                                        exec);
  return cand;
}

EquivalenceVerdict verify_equal_joint(const ComponentSystem& system_a,
                                      const AlternativeCandidate& candidate,
                                      const ScaleCoefficients& coeffs,
                                      std::span<const double> t1_nodes,
                                      std::span<const double> t2_nodes,
                                      double tolerance, Exec exec) {
  require_mixed(coeffs, "verify_equal_joint");
  require_grid(t1_nodes, "verify_equal_joint");
  require_grid(t2_nodes, "verify_equal_joint");
  if (!candidate.validity.valid || !candidate.fm || !candidate.fn)
    throw std::invalid_argument("verify_equal_joint: candidate is not a CDF");

  ComponentSystem alt = ComponentSystem::independent(
      *candidate.fm, *candidate.fn, candidate.fs1);
  const std::size_t n1 = t1_nodes.size(), n2 = t2_nodes.size();
  std::vector<double> dev(n1 * n2);
  for_each_index(n1 * n2, exec, [&](std::size_t flat) {
    double t1 = t1_nodes[flat / n2], t2 = t2_nodes[flat % n2];
    dev[flat] = std::abs(joint_cdf_mixed(system_a, coeffs, t1, t2) -
                         joint_cdf_mixed(alt, coeffs, t1, t2));
  });
  std::size_t arg = 0;
  for (std::size_t i = 1; i < dev.size(); ++i)
    if (dev[i] > dev[arg]) arg = i;

  EquivalenceVerdict verdict;
  verdict.max_deviation = dev[arg];
  verdict.equivalent = dev[arg] <= tolerance;
  verdict.witness_t1 = t1_nodes[arg / n2];
  verdict.witness_t2 = t2_nodes[arg % n2];
  verdict.lattice_limited =
      joint_cdf_mixed(system_a, coeffs, t1_nodes.back(), t2_nodes.back()) <
      0.99;
  return verdict;
}

}  // namespace maxident
