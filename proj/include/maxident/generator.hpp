#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "maxident/distribution.hpp"
#include "maxident/exec.hpp"

namespace maxident {

// Generator of a 4-ary max-independent family: the joint CDF is
//   H(x1..x4) = F1(x1) F2(x2) F3(x3) F4(x4) * beta(x1..x4)
// with beta taking values in (0,1] and tending to 1 as any coordinate
// approaches the upper support boundary.
class GeneratorSpec {
 public:
  enum class Family { constant_one, fgm, tabulated4d };

  static GeneratorSpec constant_one();

  // Single-interaction-term family: beta = 1 + alpha * prod_i (1 - Fi(xi)).
  // The (0,1] invariant needs alpha in (-1, 0]; out-of-range alpha is still
  // representable so validate_generator can exhibit the failure, but
  // samplers and system construction reject it.
  static GeneratorSpec fgm(double alpha);

  // Multilinear table over a product grid; values are row-major over the
  // axes (last axis fastest). Evaluation clamps outside the grid hull.
  static GeneratorSpec tabulated4d(std::array<std::vector<double>, 4> axes,
                                   std::vector<double> values);

  Family family() const { return family_; }
  double alpha() const { return alpha_; }
  const std::array<std::vector<double>, 4>& axes() const { return axes_; }
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;

 private:
  GeneratorSpec() = default;

  Family family_ = Family::constant_one;
  double alpha_ = 0.0;
  std::array<std::vector<double>, 4> axes_;
  std::vector<double> values_;
};

using Marginals4 = std::array<Distribution, 4>;

double beta_eval(const GeneratorSpec& gen, const Marginals4& marginals,
                 double x1, double x2, double x3, double x4);

// Finite-lattice certificate for the generator invariants. `passed` is the
// conjunction of the three component checks; witnesses locate the worst
// lattice point for each.
struct GeneratorValidation {
  bool passed = false;

  // (0,1] range of beta over the lattice.
  bool range_ok = false;
  double beta_min = 0.0;
  double beta_max = 0.0;
  std::array<double, 4> beta_min_point{};
  std::array<double, 4> beta_max_point{};

  // beta -> 1 probes along each axis upper boundary.
  bool boundary_ok = false;
  double boundary_worst = 0.0;  // max |beta - 1| over probes

  // Alternating 16-corner sums of F1 F2 F3 F4 beta over every lattice cell
  // must be >= -1e-10 for the product to be a joint CDF on the lattice.
  bool rectangles_ok = false;
  double min_rectangle_mass = 0.0;
  std::array<double, 4> worst_rectangle_corner{};  // lower corner of the cell

  std::size_t points_per_axis = 0;
};

// Scans a points_per_axis^4 quantile lattice per marginal (endpoints of the
// support included, so the lower corner has Fi = 0). Reports failures in the
// returned struct instead of throwing.
GeneratorValidation validate_generator(const GeneratorSpec& gen,
                                       const Marginals4& marginals,
                                       std::size_t points_per_axis = 7,
                                       Exec exec = Exec::parallel);

// Draws n 4-tuples from the max-independent joint law by rejection against
// the independent product; acceptance uses the copula-density ratio
// (1 + alpha prod(1 - 2 u_i)) / (1 + |alpha|). Attempt a of draw i consumes
// counter streams 5a+0..5a+3 for the components and 5a+4 for the acceptance
// uniform, so alpha = 0 reproduces independent sampling bit for bit.
// ConstantOne delegates to independent sampling directly; Tabulated4D has no
// sampler and throws.
std::vector<std::array<double, 4>> sample_maxind(const GeneratorSpec& gen,
                                                 const Marginals4& marginals,
                                                 std::size_t n,
                                                 std::uint64_t seed,
                                                 Exec exec = Exec::parallel);

}  // namespace maxident
