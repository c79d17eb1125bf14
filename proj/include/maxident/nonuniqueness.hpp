#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxident/coefficients.hpp"
#include "maxident/distribution.hpp"
#include "maxident/exec.hpp"
#include "maxident/system.hpp"

namespace maxident {

// Residuals of the mixed-sign connection relations linking two systems
// (X, Y, Z1) and (M, N, S1) with equal joint CDFs:
//   F_X(t) = F_M(t) [F_S1(t/a)(1 - F_S1((t/b)-))] / [F_Z1(t/a)(1 - F_Z1((t/b)-))]
// and symmetrically F_Y from (c, d). Residuals are reported in this quotient
// form, so equal joints within tau force residuals within tau / floor.
struct RelationReport {
  std::vector<double> nodes;
  std::vector<double> residual_fx;  // NaN where a denominator fell below floor
  std::vector<double> residual_fy;
  double max_residual_fx = 0.0;
  double max_residual_fy = 0.0;
  std::size_t skipped = 0;
};

RelationReport necessary_relations_check(const ComponentSystem& system_a,
                                         const ComponentSystem& system_b,
                                         const ScaleCoefficients& coeffs,
                                         std::span<const double> grid,
                                         double denominator_floor = 1e-12);

struct CandidateValidity {
  bool valid = true;
  double witness_node = 0.0;
  std::string reason;
};

struct EquivalenceVerdict {
  bool equivalent = false;
  double max_deviation = 0.0;
  double witness_t1 = 0.0;
  double witness_t2 = 0.0;
  // True when the probe lattice leaves substantial mass above its top
  // corner (G_A there < 0.99): a deviation of 0 is then weak evidence.
  bool lattice_limited = false;
};

// Alternative-system candidate (M, N, S1) built from a trial S1. The raw
// quotient tables are kept even when they fail to be CDFs; the Distribution
// forms and the equivalence verdict exist only for valid candidates.
struct AlternativeCandidate {
  std::vector<double> nodes;
  std::vector<double> fm_values;
  std::vector<double> fn_values;
  std::optional<Distribution> fm;
  std::optional<Distribution> fn;
  Distribution fs1;
  CandidateValidity validity;
  std::optional<EquivalenceVerdict> equivalence;
  // Self-check: relation residuals of (system, candidate) on the build grid.
  double max_relation_residual = 0.0;
};

// Solves the connection relations for F_M, F_N given a trial s1, validates
// that the quotients are genuine CDFs (monotone, within [0,1]) recording a
// witness node otherwise, and, when valid, tests joint-CDF equivalence on
// the build grid squared. s1 must share the system's support.
AlternativeCandidate construct_alternative(const ComponentSystem& system,
                                           const ScaleCoefficients& coeffs,
                                           const Distribution& s1,
                                           std::span<const double> grid,
                                           double equivalence_tolerance = 1e-9,
                                           double denominator_floor = 1e-12,
                                           Exec exec = Exec::parallel);

// Max |G_A - G_B| over the probe lattice with the argmax pair as witness;
// G_B is the candidate's joint CDF. Rejects invalid candidates.
EquivalenceVerdict verify_equal_joint(const ComponentSystem& system_a,
                                      const AlternativeCandidate& candidate,
                                      const ScaleCoefficients& coeffs,
                                      std::span<const double> t1_nodes,
                                      std::span<const double> t2_nodes,
                                      double tolerance = 1e-9,
                                      Exec exec = Exec::parallel);

}  // namespace maxident
