#pragma once

#include "maxident/distribution.hpp"
#include "maxident/generator.hpp"

namespace maxident {

enum class Dependence { independent, max_independent };

// The latent components (X, Y, Z1) with Z2 distributed as Z1, plus the
// dependence mode. All three distributions must share one support interval.
// Max-independent systems carry a generator, which is lattice-validated at
// construction; an invalid generator is a configuration error.
class ComponentSystem {
 public:
  static ComponentSystem independent(Distribution fx, Distribution fy,
                                     Distribution fz1);
  static ComponentSystem max_independent(Distribution fx, Distribution fy,
                                         Distribution fz1, GeneratorSpec gen);

  const Distribution& fx() const { return fx_; }
  const Distribution& fy() const { return fy_; }
  const Distribution& fz1() const { return fz1_; }
  Dependence dependence() const { return dependence_; }

  // Valid only when dependence() == max_independent.
  const GeneratorSpec& generator() const { return generator_; }

  // The marginal quadruple (X, Y, Z1, Z2) the generator acts on.
  Marginals4 quadruple() const { return {fx_, fy_, fz1_, fz1_}; }

  friend bool operator==(const ComponentSystem&,
                         const ComponentSystem&) = default;

 private:
  ComponentSystem(Distribution fx, Distribution fy, Distribution fz1,
                  Dependence dep, GeneratorSpec gen);

  Distribution fx_;
  Distribution fy_;
  Distribution fz1_;
  Dependence dependence_ = Dependence::independent;
  GeneratorSpec generator_ = GeneratorSpec::constant_one();
};

}  // namespace maxident
