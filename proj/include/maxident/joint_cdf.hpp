#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "maxident/coefficients.hpp"
#include "maxident/exec.hpp"
#include "maxident/system.hpp"

namespace maxident {

// Joint CDF G(t1,t2) of U = max(X, a Z1, b Z2), V = max(Y, c Z1, d Z2).
// All evaluators accept +-infinity arguments (marginals and limits follow
// from IEEE arithmetic on t/coefficient).

// All-positive coefficients, independent components:
//   G = F_X(t1) F_Y(t2) F_Z1(min(t1/a, t2/c)) F_Z1(min(t1/b, t2/d)).
double joint_cdf_positive(const ComponentSystem& system,
                          const ScaleCoefficients& coeffs, double t1,
                          double t2);

// Mixed signs (a>0, b<0, c>0, d<0): the negative slots flip into lower
// bounds on Z2, giving a left-limit survival factor:
//   G = F_X(t1) F_Y(t2) F_Z1(min(t1/a, t2/c)) (1 - F_Z1(max(t1/b, t2/d)^-)).
double joint_cdf_mixed(const ComponentSystem& system,
                       const ScaleCoefficients& coeffs, double t1, double t2);

// Max-independent components with a shared generator:
//   G = F_X(t1) F_Y(t2) F_Z1(m1) F_Z1(m2) beta(t1, t2, m1, m2).
double joint_cdf_maxind(const ComponentSystem& system,
                        const ScaleCoefficients& coeffs, double t1, double t2);

// Classic three-variable configuration Y1 = max(X0, X1), Y2 = max(X0, X2):
//   G = F1(t1) F2(t2) F0(min(t1, t2)).
double joint_cdf_kotlarski(const Distribution& f0, const Distribution& f1,
                           const Distribution& f2, double t1, double t2);

// Dispatch on regime and dependence mode; rejects unsupported combinations
// (max-independent is defined only for all-positive coefficients).
double joint_cdf_auto(const ComponentSystem& system,
                      const ScaleCoefficients& coeffs, double t1, double t2);

// Marginals as boundary limits of the joint CDF.
double marginal_u(const ComponentSystem& system,
                  const ScaleCoefficients& coeffs, double t);
double marginal_v(const ComponentSystem& system,
                  const ScaleCoefficients& coeffs, double t);

// n draws of (U, V). Component draws use counter streams 0..3 for
// (X, Y, Z1, Z2); max-independent systems use the rejection sampler's
// stream layout, which coincides on the first attempt.
std::vector<std::pair<double, double>> sample_joint(
    const ComponentSystem& system, const ScaleCoefficients& coeffs,
    std::size_t n, std::uint64_t seed, Exec exec = Exec::parallel);

// n draws of (Y1, Y2) from the three-variable model; streams 0..2 carry
// (X0, X1, X2).
std::vector<std::pair<double, double>> sample_kotlarski(
    const Distribution& f0, const Distribution& f1, const Distribution& f2,
    std::size_t n, std::uint64_t seed, Exec exec = Exec::parallel);

// A joint CDF under one of four representations. Evaluation is pure and
// safe to call concurrently.
class JointCdf2D {
 public:
  enum class Kind { analytic, kotlarski, empirical, tabulated };

  static JointCdf2D analytic(ComponentSystem system, ScaleCoefficients coeffs);
  static JointCdf2D kotlarski(Distribution f0, Distribution f1,
                              Distribution f2);
  // Pairs are copied and sorted by u.
  static JointCdf2D empirical(std::vector<std::pair<double, double>> pairs);
  // values row-major over t1 (values[i*t2.size() + j] = G(t1[i], t2[j]));
  // must be coordinatewise nondecreasing. Evaluation interpolates
  // bilinearly and clamps outside the grid hull.
  static JointCdf2D tabulated(std::vector<double> t1, std::vector<double> t2,
                              std::vector<double> values);

  Kind kind() const { return kind_; }
  double eval(double t1, double t2) const;

  const ComponentSystem& system() const { return *system_; }
  const ScaleCoefficients& coeffs() const { return *coeffs_; }
  const std::array<Distribution, 3>& kotlarski_components() const {
    return *kot_;
  }
  const std::vector<double>& us() const { return u_; }
  const std::vector<double>& vs() const { return v_; }
  const std::vector<double>& grid1() const { return t1_; }
  const std::vector<double>& grid2() const { return t2_; }
  const std::vector<double>& values() const { return values_; }

 private:
  JointCdf2D() = default;

  Kind kind_ = Kind::empirical;
  std::optional<ComponentSystem> system_;
  std::optional<ScaleCoefficients> coeffs_;
  std::optional<std::array<Distribution, 3>> kot_;
  std::vector<double> u_, v_;           // empirical, co-sorted by u
  std::vector<double> t1_, t2_, values_;  // tabulated
};

// Row-major evaluation of g over t1s x t2s.
std::vector<double> eval_grid(const JointCdf2D& g, std::span<const double> t1s,
                              std::span<const double> t2s,
                              Exec exec = Exec::parallel);

}  // namespace maxident
