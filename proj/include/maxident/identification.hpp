#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maxident/coefficients.hpp"
#include "maxident/distribution.hpp"
#include "maxident/exec.hpp"
#include "maxident/generator.hpp"
#include "maxident/joint_cdf.hpp"
#include "maxident/system.hpp"

namespace maxident {

// Real function sampled on a node set; NaN values mark nodes skipped by the
// denominator-floor guards.
struct TabulatedFunction {
  std::vector<double> nodes;
  std::vector<double> values;
};

struct GridSolverConfig {
  int starts = 5;
  int max_iterations = 10000;
  double objective_decrease_tol = 1e-14;
  double agreement_tol = 1e-4;
  double denominator_floor = 1e-12;
  // Cap on probe pairs; when exceeded, a fixed golden-ratio subsample keeps
  // runs reproducible. 0 means the default cap.
  std::size_t max_probes = 0;
  // Additional starts seeded from explicit candidate CDFs (evaluated on the
  // solver's node set), e.g. a known truth in tests.
  std::vector<Distribution> extra_initializers;
};

struct StartReport {
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct SolverReport {
  std::string method;
  std::vector<StartReport> starts;
  std::vector<double> objective_trace;  // winning start only
  int best_start = -1;
  // Max pairwise sup distance between the F_Z1 tables of all starts; the
  // computable surrogate for uniqueness.
  double multistart_agreement = 0.0;
  bool agreed = true;
  std::size_t probe_count = 0;
  std::size_t skipped_probes = 0;
  std::size_t unknown_count = 0;
};

struct RecoveryResult {
  Distribution fx_hat;
  Distribution fy_hat;
  Distribution fz1_hat;
  // Max over the probe lattice of |G(model) - G(input)|, recomputed from the
  // recovered tables, not the solver objective.
  double sup_residual = 0.0;
  SolverReport report;
  std::vector<double> skipped_nodes;
};

// Closed-form three-variable recovery. With F_Y1(t) = g(t, inf) and
// F_Y2(t) = g(inf, t):
//   F0 = F_Y1 F_Y2 / g(t,t),  F1 = g(t,t) / F_Y2,  F2 = g(t,t) / F_Y1.
// Grid nodes where g(t,t) or a marginal falls below the floor are skipped
// and reported.
RecoveryResult recover_kotlarski(const JointCdf2D& g,
                                 std::span<const double> grid,
                                 double denominator_floor = 1e-12);

// Quotient-based F_Z1 recovery for all-positive coefficients, using the
// identity F_U(t1) F_V(t2) / G(t1,t2) = F_Z1(r1) F_Z1(r2) with
// r1 = max(t1/a, t2/c), r2 = max(t1/b, t2/d). Probe rays are chosen so one
// factor is eliminated: equal arguments (diagonal square root) when the
// admissible ratio window contains 1, otherwise an upward alternating
// product toward the boundary normalization F_Z1 -> 1. Coefficients whose
// window lies strictly below 1 admit neither and are rejected with a
// pointer to the grid solver. Returns F_Z1 tabulated at the grid nodes.
Distribution region_quotient_fz1(const JointCdf2D& g,
                                 const ScaleCoefficients& coeffs,
                                 std::span<const double> grid,
                                 double denominator_floor = 1e-12);

// Least-squares recovery of all three components for general all-positive
// coefficients: parametrizes phi = log F_Z1 on the union of scaled grids,
// fits the log factorization residuals over a fixed probe-pair lattice by
// accelerated projected gradient descent (isotonic projection per step),
// and multistarts to surface ambiguity.
RecoveryResult recover_positive_general(const JointCdf2D& g,
                                        const ScaleCoefficients& coeffs,
                                        std::span<const double> grid,
                                        const GridSolverConfig& config = {},
                                        Exec exec = Exec::parallel);

// Divides the known generator factor beta(t1, t2, m1, m2) out of g and
// delegates to recover_positive_general. gen_marginals are the component
// marginals the generator is defined against (X, Y, Z1, Z2 of the
// generating system). ConstantOne divides by exactly 1.0, making the result
// bit-identical to the independent path.
RecoveryResult recover_maxind(const JointCdf2D& g,
                              const ScaleCoefficients& coeffs,
                              const GeneratorSpec& gen,
                              const Marginals4& gen_marginals,
                              std::span<const double> grid,
                              const GridSolverConfig& config = {},
                              Exec exec = Exec::parallel);

// Pointwise ratios eta1 = Fx_A/Fx_B, eta2 = Fy_A/Fy_B, eta3 = Fz1_A/Fz1_B
// and the residuals of the product identity
//   eta1(t1) eta2(t2) eta3(m1) eta3(m2) = 1,
// plus zeta = log eta3 and the antiperiodic residual |zeta(u)+zeta(lu)|,
// l = a/b. Floor-guarded entries are NaN.
struct RatioDiagnostics {
  TabulatedFunction eta1, eta2, eta3, zeta;
  double lambda = 1.0;
  std::vector<double> grid;
  std::vector<double> residual_product;  // row-major over grid x grid
  std::vector<double> residual_antiperiodic;
  double max_residual_product = 0.0;
  double max_residual_antiperiodic = 0.0;
  std::size_t skipped = 0;
};

RatioDiagnostics ratio_diagnostics(const ComponentSystem& system_a,
                                   const ComponentSystem& system_b,
                                   const ScaleCoefficients& coeffs,
                                   std::span<const double> grid,
                                   double denominator_floor = 1e-12,
                                   Exec exec = Exec::parallel);

enum class AntiperiodicVerdict { vanishes, inconclusive, violated };

struct AntiperiodicResult {
  AntiperiodicVerdict verdict = AntiperiodicVerdict::inconclusive;
  double witness = 0.0;  // node violating zeta(u) = -zeta(lambda u)
  double worst_pair_residual = 0.0;
  double max_abs_zeta = 0.0;
  // Largest |zeta| at the boundary end of the iteration chains.
  double max_terminal_magnitude = 0.0;
};

// Checks zeta(u) = -zeta(lambda u) on a grid closed under multiplication by
// lambda (a configuration error otherwise) and iterates toward the upper
// boundary. "vanishes" needs the relation to hold and, unless zeta is
// already identically zero, the boundary_decay flag plus small terminal
// magnitudes; a relation failure is "violated" with the witness node;
// everything else (including the no-leverage case lambda = 1 with nonzero
// zeta) is "inconclusive".
AntiperiodicResult antiperiodic_vanishing_check(const TabulatedFunction& zeta,
                                                double lambda,
                                                bool boundary_decay,
                                                double pair_tol = 1e-8,
                                                double vanish_tol = 1e-8);

// Monotone kernel-smoothed table from an empirical joint CDF: an optional
// preprocessing step before quotient-based recovery, never applied
// implicitly. Uses the integrated Epanechnikov kernel per axis.
JointCdf2D smooth_empirical(const JointCdf2D& g, double bandwidth,
                            std::span<const double> t1_nodes,
                            std::span<const double> t2_nodes,
                            Exec exec = Exec::parallel);

}  // namespace maxident
