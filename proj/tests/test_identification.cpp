#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "maxident/identification.hpp"
#include "oracles.hpp"

using namespace maxident;

namespace {

const double inf = std::numeric_limits<double>::infinity();

// Sup distance between a recovered table and a truth CDF over the table's
// own nodes, ignoring nodes where the truth is numerically zero.
double table_error(const Distribution& hat, const Distribution& truth,
                   double floor = 1e-9) {
  double worst = 0.0;
  for (std::size_t i = 0; i < hat.nodes().size(); ++i) {
    double t = hat.nodes()[i];
    if (truth.cdf(t) < floor) continue;
    worst = std::max(worst, std::abs(hat.values()[i] - truth.cdf(t)));
  }
  return worst;
}

}  // namespace

TEST_CASE("closed-form three-variable recovery") {
  auto f0 = Distribution::exponential(1.0);
  auto f1 = Distribution::exponential(2.0);
  auto f2 = Distribution::weibull(2.0, 1.0);

  SUBCASE("analytic input reproduces each component") {
    auto g = JointCdf2D::kotlarski(f0, f1, f2);
    auto grid = oracles::linspace(0.05, 6.0, 120);
    grid.push_back(std::log(2.0));  // exact node for the spot check below
    std::sort(grid.begin(), grid.end());
    auto rec = recover_kotlarski(g, grid);
    CHECK(rec.fz1_hat.cdf(std::log(2.0)) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(table_error(rec.fz1_hat, f0) <= 1e-9);
    CHECK(table_error(rec.fx_hat, f1) <= 1e-9);
    CHECK(table_error(rec.fy_hat, f2) <= 1e-9);
    CHECK(rec.sup_residual <= 1e-9);
    CHECK(rec.skipped_nodes.empty());
    CHECK(rec.report.method == "kotlarski-closed-form");
  }
  SUBCASE("identical components come back identical") {
    auto g = JointCdf2D::kotlarski(f0, f0, f0);
    auto grid = oracles::linspace(0.1, 5.0, 60);
    auto rec = recover_kotlarski(g, grid);
    CHECK(table_error(rec.fz1_hat, f0) <= 1e-10);
    CHECK(table_error(rec.fx_hat, f0) <= 1e-10);
    CHECK(table_error(rec.fy_hat, f0) <= 1e-10);
  }
  SUBCASE("empirical input stays within the sampling tolerance") {
    auto pairs = sample_kotlarski(f0, f1, f2, 200000, 1);
    // Probe the central 90% band of both observed margins; outside it the
    // ratio estimators divide by near-vanishing tail probabilities.
    std::vector<double> us, vs;
    for (auto [u, v] : pairs) {
      us.push_back(u);
      vs.push_back(v);
    }
    std::sort(us.begin(), us.end());
    std::sort(vs.begin(), vs.end());
    std::size_t n = pairs.size();
    auto grid = oracles::linspace(std::max(us[n / 20], vs[n / 20]),
                                  std::min(us[n - n / 20], vs[n - n / 20]),
                                  80);
    auto g = JointCdf2D::empirical(std::move(pairs));
    auto rec = recover_kotlarski(g, grid);
    CHECK(table_error(rec.fz1_hat, f0, 0.0) <= 0.03);
    CHECK(table_error(rec.fx_hat, f1, 0.0) <= 0.03);
    CHECK(table_error(rec.fy_hat, f2, 0.0) <= 0.03);
  }
  SUBCASE("nodes below the floor are skipped and reported") {
    auto g = JointCdf2D::kotlarski(f0, f1, f2);
    std::vector<double> grid = {-1.0, -0.5, 1.0, 2.0, 3.0};
    auto rec = recover_kotlarski(g, grid);
    CHECK(rec.skipped_nodes == std::vector<double>{-1.0, -0.5});
    CHECK(rec.fz1_hat.nodes().size() == 3);
  }
}

TEST_CASE("quotient identity inside the probe region") {
  // For coefficients (2,1,1,2) the region t1/a <= t2/c, t1/b >= t2/d is
  // nonempty, and there F_U(t1) F_V(t2) / G = F_Z1(t1/b) F_Z1(t2/c).
  auto e = Distribution::exponential(1.0);
  auto sys = ComponentSystem::independent(
      Distribution::weibull(2.0, 1.0), Distribution::exponential(0.5), e);
  auto coeffs = ScaleCoefficients::all_positive(2.0, 1.0, 1.0, 2.0);
  auto g = JointCdf2D::analytic(sys, coeffs);
  for (double t1 : oracles::linspace(0.3, 3.0, 10))
    for (double t2 : oracles::linspace(0.3, 3.0, 10)) {
      if (!(t1 / 2.0 <= t2 && t1 >= t2 / 2.0)) continue;
      double q = g.eval(t1, inf) * g.eval(inf, t2) / g.eval(t1, t2);
      CHECK(std::abs(q - e.cdf(t1 / 1.0) * e.cdf(t2 / 1.0)) <= 1e-10);
    }
}

TEST_CASE("region-quotient recovery of the common factor") {
  auto e = Distribution::exponential(1.0);
  auto sys = ComponentSystem::independent(e, e, e);

  SUBCASE("diagonal probes, coefficients (1,2,2,1)") {
    auto coeffs = ScaleCoefficients::all_positive(1.0, 2.0, 2.0, 1.0);
    auto g = JointCdf2D::analytic(sys, coeffs);
    auto grid = oracles::linspace(0.05, 5.0, 100);
    auto fz = region_quotient_fz1(g, coeffs, grid);
    CHECK(table_error(fz, e) <= 1e-9);
  }
  SUBCASE("uniform truth comes back exactly linear") {
    auto u = Distribution::uniform(0.0, 1.0);
    auto usys = ComponentSystem::independent(u, u, u);
    auto coeffs = ScaleCoefficients::all_positive(1.0, 2.0, 2.0, 1.0);
    auto g = JointCdf2D::analytic(usys, coeffs);
    auto grid = oracles::linspace(0.02, 0.98, 49);
    auto fz = region_quotient_fz1(g, coeffs, grid);
    for (std::size_t i = 0; i < fz.nodes().size(); ++i)
      CHECK(std::abs(fz.values()[i] - fz.nodes()[i]) <= 1e-9);
  }
  SUBCASE("unit coefficients degenerate to the diagonal") {
    auto coeffs = ScaleCoefficients::all_positive(1.0, 1.0, 1.0, 1.0);
    auto g = JointCdf2D::analytic(sys, coeffs);
    auto grid = oracles::linspace(0.1, 4.0, 40);
    auto fz = region_quotient_fz1(g, coeffs, grid);
    CHECK(table_error(fz, e) <= 1e-9);
  }
  SUBCASE("ratio window strictly above one telescopes to the boundary") {
    auto coeffs = ScaleCoefficients::all_positive(1.0, 2.0, 1.0, 4.0);
    auto g = JointCdf2D::analytic(sys, coeffs);
    auto grid = oracles::linspace(0.2, 3.0, 30);
    auto fz = region_quotient_fz1(g, coeffs, grid);
    CHECK(table_error(fz, e) <= 1e-9);
  }
  SUBCASE("window strictly below one is rejected toward the grid solver") {
    auto coeffs = ScaleCoefficients::all_positive(4.0, 1.0, 3.0, 1.0);
    auto g = JointCdf2D::analytic(sys, coeffs);
    auto grid = oracles::linspace(0.2, 3.0, 30);
    CHECK_THROWS_AS((void)region_quotient_fz1(g, coeffs, grid),
                    std::invalid_argument);
  }
}

TEST_CASE("general positive-coefficient grid solver") {
  GridSolverConfig cfg;

  SUBCASE("equal first coefficients, exponential truth") {
    auto e = Distribution::exponential(1.0);
    auto sys = ComponentSystem::independent(e, e, e);
    auto coeffs = ScaleCoefficients::all_positive(1.0, 1.0, 2.0, 2.0);
    auto g = JointCdf2D::analytic(sys, coeffs);
    auto grid = oracles::linspace(0.1, 4.0, 40);
    auto rec = recover_positive_general(g, coeffs, grid, cfg);
    CHECK(rec.report.agreed);
    CHECK(rec.report.multistart_agreement <= 1e-4);
    CHECK(table_error(rec.fz1_hat, e, 1e-6) <= 1e-3);
    CHECK(table_error(rec.fx_hat, e, 1e-6) <= 1e-3);
    CHECK(table_error(rec.fy_hat, e, 1e-6) <= 1e-3);
    CHECK(rec.sup_residual <= 1e-3);
    CHECK(rec.report.method == "grid-lsq");
  }
  SUBCASE("unequal coefficients with smooth truth") {
    auto w = Distribution::weibull(2.0, 1.0);
    auto sys = ComponentSystem::independent(w, w, w);
    auto coeffs = ScaleCoefficients::all_positive(1.0, 3.0, 2.0, 1.0);
    auto g = JointCdf2D::analytic(sys, coeffs);
    auto grid = oracles::linspace(0.1, 2.8, 40);
    auto rec = recover_positive_general(g, coeffs, grid, cfg);
    CHECK(rec.report.agreed);
    CHECK(table_error(rec.fz1_hat, w, 1e-6) <= 1e-3);
    CHECK(rec.sup_residual <= 1e-3);
  }
  SUBCASE("initializing at the truth is a fixed point") {
    auto e = Distribution::exponential(1.0);
    auto sys = ComponentSystem::independent(e, e, e);
    auto coeffs = ScaleCoefficients::all_positive(1.0, 1.0, 2.0, 2.0);
    auto g = JointCdf2D::analytic(sys, coeffs);
    auto grid = oracles::linspace(0.1, 4.0, 30);
    GridSolverConfig tcfg;
    tcfg.extra_initializers = {e};
    auto rec = recover_positive_general(g, coeffs, grid, tcfg);
    REQUIRE(rec.report.starts.size() == 6);
    const StartReport& truth_start = rec.report.starts.back();
    CHECK(truth_start.objective <= 1e-18);
    CHECK(truth_start.converged);
    CHECK(truth_start.iterations <= 2);  // no movement beyond the first probe
    CHECK(rec.report.best_start == 5);
    CHECK(table_error(rec.fz1_hat, e, 1e-6) <= 1e-6);
  }
  SUBCASE("config validation") {
    auto e = Distribution::exponential(1.0);
    auto sys = ComponentSystem::independent(e, e, e);
    auto coeffs = ScaleCoefficients::all_positive(1.0, 1.0, 2.0, 2.0);
    auto g = JointCdf2D::analytic(sys, coeffs);
    auto grid = oracles::linspace(0.1, 4.0, 10);
    GridSolverConfig bad;
    bad.starts = 0;
    CHECK_THROWS_AS((void)recover_positive_general(g, coeffs, grid, bad),
                    std::invalid_argument);
    std::vector<double> neg = {-1.0, 1.0, 2.0};
    CHECK_THROWS_AS((void)recover_positive_general(g, coeffs, neg, cfg),
                    std::invalid_argument);
  }
}

TEST_CASE("generator-divided recovery") {
  auto e = Distribution::exponential(1.0);
  auto coeffs = ScaleCoefficients::all_positive(1.0, 1.0, 2.0, 2.0);
  auto grid = oracles::linspace(0.1, 4.0, 40);
  GridSolverConfig cfg;

  SUBCASE("constant-one generator is bit-identical to the independent path") {
    auto sys = ComponentSystem::independent(e, e, e);
    auto g = JointCdf2D::analytic(sys, coeffs);
    auto plain = recover_positive_general(g, coeffs, grid, cfg);
    auto divided = recover_maxind(g, coeffs, GeneratorSpec::constant_one(),
                                  sys.quadruple(), grid, cfg);
    CHECK(divided.fz1_hat.values() == plain.fz1_hat.values());
    CHECK(divided.fx_hat.values() == plain.fx_hat.values());
    CHECK(divided.fy_hat.values() == plain.fy_hat.values());
    CHECK(divided.sup_residual == plain.sup_residual);
    CHECK(divided.report.objective_trace == plain.report.objective_trace);
  }
  SUBCASE("matched generator recovers; wrong generator inflates residual") {
    auto gen = GeneratorSpec::fgm(-0.5);
    auto sys = ComponentSystem::max_independent(e, e, e, gen);
    auto g = JointCdf2D::analytic(sys, coeffs);
    auto matched =
        recover_maxind(g, coeffs, gen, sys.quadruple(), grid, cfg);
    CHECK(matched.report.agreed);
    CHECK(table_error(matched.fz1_hat, e, 1e-6) <= 1e-3);
    CHECK(table_error(matched.fx_hat, e, 1e-6) <= 1e-3);
    auto wrong = recover_positive_general(g, coeffs, grid, cfg);
    CHECK(wrong.sup_residual >= 10.0 * matched.sup_residual);
  }
  SUBCASE("invalid generator parameters are rejected") {
    auto sys = ComponentSystem::independent(e, e, e);
    auto g = JointCdf2D::analytic(sys, coeffs);
    CHECK_THROWS_AS(
        (void)recover_maxind(g, coeffs, GeneratorSpec::fgm(-1.5),
                             sys.quadruple(), grid, cfg),
        std::invalid_argument);
  }
}

TEST_CASE("ratio diagnostics") {
  auto e = Distribution::exponential(1.0);
  auto sys = ComponentSystem::independent(e, e, e);
  auto coeffs = ScaleCoefficients::all_positive(1.0, 2.0, 2.0, 1.0);
  auto grid = oracles::linspace(0.25, 4.0, 24);

  SUBCASE("identical systems have unit ratios and zero residuals") {
    auto diag = ratio_diagnostics(sys, sys, coeffs, grid);
    CHECK(diag.max_residual_product == 0.0);
    CHECK(diag.max_residual_antiperiodic == 0.0);
    CHECK(diag.lambda == 0.5);
    for (double v : diag.eta3.values) CHECK(v == 1.0);
    for (double v : diag.zeta.values) CHECK(v == 0.0);
  }
  SUBCASE("equal joint cdfs by re-representation stay within 1e-12") {
    // Tabulate the same components on a node set covering every probe the
    // diagnostics will touch, so the second system is a different object
    // with pointwise-equal CDFs.
    std::vector<double> nodes;
    for (double t : grid)
      for (double s : {t, t / coeffs.a, t / coeffs.b, t / coeffs.c,
                       t / coeffs.d, t * (coeffs.a / coeffs.b)})
        nodes.push_back(s);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    std::vector<double> vals;
    vals.reserve(nodes.size());
    for (double s : nodes) vals.push_back(e.cdf(s));
    auto tab = Distribution::tabulated(nodes, vals, e.support());
    auto sys_b = ComponentSystem::independent(tab, tab, tab);
    auto diag = ratio_diagnostics(sys, sys_b, coeffs, grid);
    CHECK(diag.max_residual_product <= 1e-12);
    CHECK(diag.max_residual_antiperiodic <= 1e-10);
  }
  SUBCASE("a 0.05-mass mixture bump is detected") {
    // F_B = 0.95 F_Z1 + 0.05 Bump on a fine table.
    auto bump = Distribution::uniform(0.5, 1.5);
    auto fine = oracles::linspace(1e-4, 40.0, 4000);
    std::vector<double> vals;
    vals.reserve(fine.size());
    for (double t : fine) vals.push_back(0.95 * e.cdf(t) + 0.05 * bump.cdf(t));
    auto mixed = Distribution::tabulated(fine, vals, e.support());
    auto sys_b = ComponentSystem::independent(e, e, mixed);
    auto diag = ratio_diagnostics(sys, sys_b, coeffs, grid);
    CHECK(diag.max_residual_product >= 1e-3);
  }
  SUBCASE("floor guards report skips instead of dividing by zero") {
    auto u = Distribution::uniform(1.0, 2.0);
    auto usys = ComponentSystem::independent(u, u, u);
    std::vector<double> wide = {0.5, 0.8, 1.2, 1.5, 1.9};  // straddles support
    auto diag = ratio_diagnostics(usys, usys, coeffs, wide);
    CHECK(diag.skipped > 0);
    CHECK(std::isnan(diag.eta3.values[0]));  // F(0.5) = 0 below the floor
    for (std::size_t i = 0; i < diag.eta3.values.size(); ++i)
      if (!std::isnan(diag.eta3.values[i])) CHECK(diag.eta3.values[i] > 0.0);
  }
  SUBCASE("preconditions") {
    auto mix = ScaleCoefficients::mixed_sign(1.0, -1.0, 1.0, -1.0);
    CHECK_THROWS_AS((void)ratio_diagnostics(sys, sys, mix, grid),
                    std::invalid_argument);
    auto u = Distribution::uniform(0.0, 1.0);
    auto other = ComponentSystem::independent(u, u, u);
    CHECK_THROWS_AS((void)ratio_diagnostics(sys, other, coeffs, grid),
                    std::invalid_argument);
  }
}

TEST_CASE("antiperiodic vanishing check") {
  SUBCASE("identically zero zeta vanishes for any lambda") {
    std::vector<double> nodes;
    for (int k = 0; k <= 6; ++k) nodes.push_back(0.5 * std::pow(3.7, k));
    TabulatedFunction zeta{nodes, std::vector<double>(nodes.size(), 0.0)};
    auto res = antiperiodic_vanishing_check(zeta, 3.7, false);
    CHECK(res.verdict == AntiperiodicVerdict::vanishes);
  }
  SUBCASE("cdf-ratio zeta violates the relation with a witness") {
    auto f1 = Distribution::exponential(1.0);
    auto f2 = Distribution::exponential(2.0);
    std::vector<double> nodes, values;
    for (int k = -3; k <= 4; ++k) {
      double u = 0.3 * std::pow(2.0, k);
      nodes.push_back(u);
      values.push_back(std::log(f1.cdf(u) / f2.cdf(u)));
    }
    auto res = antiperiodic_vanishing_check({nodes, values}, 2.0, true);
    CHECK(res.verdict == AntiperiodicVerdict::violated);
    CHECK(res.worst_pair_residual > 1e-8);
    CHECK(res.witness >= nodes.front());
    CHECK(res.witness <= nodes.back());
  }
  SUBCASE("antiperiodic cosine without boundary decay is inconclusive") {
    const double lambda = 2.0;
    std::vector<double> nodes, values;
    for (int k = -6; k <= 6; ++k) {
      double u = std::pow(lambda, k);
      nodes.push_back(u);
      values.push_back(std::cos(M_PI * std::log(u) / std::log(lambda)));
    }
    auto res = antiperiodic_vanishing_check({nodes, values}, lambda, false);
    CHECK(res.verdict == AntiperiodicVerdict::inconclusive);
    CHECK(res.worst_pair_residual <= 1e-8);  // the relation itself holds
    // Even granting decay at the boundary, the terminal magnitude keeps it
    // from a "vanishes" verdict.
    auto res2 = antiperiodic_vanishing_check({nodes, values}, lambda, true);
    CHECK(res2.verdict == AntiperiodicVerdict::inconclusive);
    CHECK(res2.max_terminal_magnitude == doctest::Approx(1.0));
  }
  SUBCASE("lambda below one mirrors to its reciprocal") {
    std::vector<double> nodes, values;
    for (int k = 0; k <= 8; ++k) {
      double u = 0.25 * std::pow(2.0, k);
      nodes.push_back(u);
      values.push_back(0.0);
    }
    auto up = antiperiodic_vanishing_check({nodes, values}, 2.0, false);
    auto down = antiperiodic_vanishing_check({nodes, values}, 0.5, false);
    CHECK(up.verdict == down.verdict);
  }
  SUBCASE("lambda one has no leverage") {
    TabulatedFunction zero{oracles::linspace(1.0, 2.0, 5),
                           std::vector<double>(5, 0.0)};
    CHECK(antiperiodic_vanishing_check(zero, 1.0, true).verdict ==
          AntiperiodicVerdict::vanishes);
    TabulatedFunction nonzero{oracles::linspace(1.0, 2.0, 5),
                              std::vector<double>(5, 0.2)};
    CHECK(antiperiodic_vanishing_check(nonzero, 1.0, true).verdict ==
          AntiperiodicVerdict::inconclusive);
  }
  SUBCASE("configuration errors") {
    TabulatedFunction zeta{{1.0, 1.3, 2.9}, {0.0, 0.0, 0.0}};
    CHECK_THROWS_AS((void)antiperiodic_vanishing_check(zeta, 2.0, false),
                    std::invalid_argument);  // grid not closed under lambda
    TabulatedFunction ok{{1.0, 2.0, 4.0}, {0.0, 0.0, 0.0}};
    CHECK_THROWS_AS((void)antiperiodic_vanishing_check(ok, -2.0, false),
                    std::invalid_argument);
  }
}

TEST_CASE("kernel smoothing of an empirical joint cdf") {
  auto e = Distribution::exponential(1.0);
  auto sys = ComponentSystem::independent(e, e, e);
  auto coeffs = ScaleCoefficients::all_positive(1.0, 1.0, 1.0, 1.0);
  auto analytic = JointCdf2D::analytic(sys, coeffs);
  auto pairs = sample_joint(sys, coeffs, 20000, 47);
  auto g = JointCdf2D::empirical(pairs);
  auto nodes = oracles::linspace(0.2, 4.0, 25);
  auto smooth = smooth_empirical(g, 0.15, nodes, nodes);
  CHECK(smooth.kind() == JointCdf2D::Kind::tabulated);
  double worst = 0.0;
  for (double t1 : nodes)
    for (double t2 : nodes)
      worst = std::max(worst,
                       std::abs(smooth.eval(t1, t2) - analytic.eval(t1, t2)));
  CHECK(worst <= 0.05);
  CHECK_THROWS_AS((void)smooth_empirical(analytic, 0.1, nodes, nodes),
                  std::invalid_argument);
}
