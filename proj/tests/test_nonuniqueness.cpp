#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "maxident/joint_cdf.hpp"
#include "maxident/nonuniqueness.hpp"
#include "oracles.hpp"

using namespace maxident;

namespace {

const auto mixed = ScaleCoefficients::mixed_sign(1.0, -1.0, 1.0, -1.0);

}  // namespace

TEST_CASE("necessary relations") {
  auto e1 = Distribution::exponential(1.0);
  auto e2 = Distribution::exponential(2.0);
  auto grid = oracles::linspace(0.2, 4.0, 39);

  SUBCASE("a system equals itself with zero residual") {
    auto sys = ComponentSystem::independent(e1, e1, e1);
    auto rep = necessary_relations_check(sys, sys, mixed, grid);
    CHECK(rep.max_residual_fx == 0.0);
    CHECK(rep.max_residual_fy == 0.0);
    CHECK(rep.skipped == 0);
  }
  SUBCASE("changing Z1 while keeping F_X violates the relation") {
    auto sys_a = ComponentSystem::independent(e1, e1, e1);
    auto sys_b = ComponentSystem::independent(e1, e1, e2);
    auto rep = necessary_relations_check(sys_a, sys_b, mixed, grid);
    CHECK(rep.max_residual_fx >= 1e-3);
    CHECK(rep.max_residual_fy >= 1e-3);
  }
  SUBCASE("all-positive coefficients are rejected") {
    auto sys = ComponentSystem::independent(e1, e1, e1);
    auto pos = ScaleCoefficients::all_positive(1.0, 2.0, 2.0, 1.0);
    CHECK_THROWS_AS((void)necessary_relations_check(sys, sys, pos, grid),
                    std::invalid_argument);
  }
}

TEST_CASE("alternative construction from a trial common factor") {
  auto e1 = Distribution::exponential(1.0);
  auto e2 = Distribution::exponential(2.0);
  auto sys = ComponentSystem::independent(e1, e1, e1);
  auto grid = oracles::linspace(0.2, 4.0, 39);

  SUBCASE("the identity trial reproduces the system exactly") {
    auto cand = construct_alternative(sys, mixed, sys.fz1(), grid);
    REQUIRE(cand.validity.valid);
    REQUIRE(cand.equivalence.has_value());
    CHECK(cand.equivalence->max_deviation == 0.0);
    CHECK(cand.equivalence->equivalent);
    CHECK(cand.max_relation_residual <= 1e-15);
    for (std::size_t k = 0; k < cand.nodes.size(); ++k)
      CHECK(cand.fm_values[k] == e1.cdf(cand.nodes[k]));
  }
  SUBCASE("a doubled-rate trial passes the relations but not equivalence") {
    // On [0, inf) the negative slots are inert, so the solved component is
    // F_M(t) = F_X F_Z / F_S = (1 - e^-t)^2 / (1 - e^-2t) = tanh(t/2):
    // a genuine CDF, yet the joints differ by the factor
    // (F_Z/F_S)(max(t1,t2)) < 1.
    auto cand = construct_alternative(sys, mixed, e2, grid);
    REQUIRE(cand.validity.valid);
    for (std::size_t k = 0; k < cand.nodes.size(); ++k)
      CHECK(cand.fm_values[k] ==
            doctest::Approx(std::tanh(cand.nodes[k] / 2.0)).epsilon(1e-12));
    CHECK(cand.max_relation_residual <= 1e-12);
    REQUIRE(cand.equivalence.has_value());
    CHECK_FALSE(cand.equivalence->equivalent);
    CHECK(cand.equivalence->max_deviation >= 1e-3);
    CHECK(cand.equivalence->witness_t1 >= grid.front());
    CHECK(cand.equivalence->witness_t1 <= grid.back());
    // Deterministic under repetition.
    auto again = construct_alternative(sys, mixed, e2, grid);
    CHECK(again.equivalence->max_deviation == cand.equivalence->max_deviation);
    CHECK(again.equivalence->witness_t1 == cand.equivalence->witness_t1);
    CHECK(again.equivalence->witness_t2 == cand.equivalence->witness_t2);
  }
  SUBCASE("a trial bending the quotient downward is flagged, with witness") {
    auto u = Distribution::uniform(-1.0, 1.0);
    auto usys = ComponentSystem::independent(u, u, u);
    auto s = Distribution::tabulated({-1.0, -0.5, -0.4, 1.0},
                                     {0.0, 0.22, 0.35, 1.0});
    auto fine = oracles::linspace(-0.9, 0.9, 73);
    auto cand = construct_alternative(usys, mixed, s, fine);
    CHECK_FALSE(cand.validity.valid);
    CHECK(cand.validity.reason == "fm decreases");
    CHECK(cand.validity.witness_node >= -0.6);
    CHECK(cand.validity.witness_node <= -0.3);
    CHECK_FALSE(cand.fm.has_value());
    CHECK_FALSE(cand.equivalence.has_value());
    CHECK_THROWS_AS((void)verify_equal_joint(usys, cand, mixed, fine, fine),
                    std::invalid_argument);
  }
  SUBCASE("preconditions") {
    auto pos = ScaleCoefficients::all_positive(1.0, 2.0, 2.0, 1.0);
    CHECK_THROWS_AS((void)construct_alternative(sys, pos, e2, grid),
                    std::invalid_argument);
    auto u01 = Distribution::uniform(0.0, 1.0);
    CHECK_THROWS_AS((void)construct_alternative(sys, mixed, u01, grid),
                    std::invalid_argument);
  }
}

TEST_CASE("joint-cdf equivalence verdicts") {
  auto e1 = Distribution::exponential(1.0);
  auto sys = ComponentSystem::independent(e1, e1, e1);

  SUBCASE("a short lattice is flagged as weak evidence") {
    auto shortg = oracles::linspace(0.05, 0.5, 10);
    auto cand = construct_alternative(sys, mixed, sys.fz1(), shortg);
    REQUIRE(cand.equivalence.has_value());
    CHECK(cand.equivalence->equivalent);
    CHECK(cand.equivalence->lattice_limited);
  }
  SUBCASE("a lattice reaching the upper tail is not") {
    auto longg = oracles::linspace(0.05, 6.0, 40);
    auto cand = construct_alternative(sys, mixed, sys.fz1(), longg);
    REQUIRE(cand.equivalence.has_value());
    CHECK_FALSE(cand.equivalence->lattice_limited);
  }
  SUBCASE("explicit lattices can differ from the build grid") {
    auto grid = oracles::linspace(0.2, 4.0, 20);
    auto cand = construct_alternative(sys, mixed, sys.fz1(), grid);
    REQUIRE(cand.nodes.size() == grid.size());
    // Rectangular lattice of distinct subsets of the candidate's node set
    // (off-node probes would measure table interpolation, not the model).
    std::vector<double> t1, t2;
    for (std::size_t i = 0; i < grid.size(); i += 2) t1.push_back(grid[i]);
    for (std::size_t i = 1; i < grid.size(); i += 3) t2.push_back(grid[i]);
    auto verdict = verify_equal_joint(sys, cand, mixed, t1, t2);
    CHECK(verdict.equivalent);
    CHECK(verdict.max_deviation <= 1e-9);
  }
}
