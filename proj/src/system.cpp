#include "maxident/system.hpp"

#include <stdexcept>

namespace maxident {

ComponentSystem::ComponentSystem(Distribution fx, Distribution fy,
                                 Distribution fz1, Dependence dep,
                                 GeneratorSpec gen)
    : fx_(std::move(fx)),
      fy_(std::move(fy)),
      fz1_(std::move(fz1)),
      dependence_(dep),
      generator_(std::move(gen)) {
  if (!same_interval(fx_.support(), fy_.support()) ||
      !same_interval(fx_.support(), fz1_.support()))
    throw std::invalid_argument(
        "system: components must share the same support interval");
}

ComponentSystem ComponentSystem::independent(Distribution fx, Distribution fy,
                                             Distribution fz1) {
  return ComponentSystem(std::move(fx), std::move(fy), std::move(fz1),
                         Dependence::independent,
                         GeneratorSpec::constant_one());
}

ComponentSystem ComponentSystem::max_independent(Distribution fx,
                                                 Distribution fy,
                                                 Distribution fz1,
                                                 GeneratorSpec gen) {
  ComponentSystem sys(std::move(fx), std::move(fy), std::move(fz1),
                      Dependence::max_independent, std::move(gen));
  GeneratorValidation v =
      validate_generator(sys.generator_, sys.quadruple(), 7, Exec::serial);
  if (!v.passed)
    throw std::invalid_argument(
        "system: generator failed lattice validation (range/boundary/"
        "rectangle checks)");
  return sys;
}

}  // namespace maxident
