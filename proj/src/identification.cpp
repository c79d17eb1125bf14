#include "maxident/identification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>

#include "maxident/isotonic.hpp"
#include "maxident/rng.hpp"

namespace maxident {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate_grid(std::span<const double> grid, bool positive) {
  if (grid.size() < 2)
    throw std::invalid_argument("grid: need at least two nodes");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]))
      throw std::invalid_argument("grid: nodes must be finite");
    if (positive && !(grid[i] > 0.0))
      throw std::invalid_argument(
          "grid: nodes must be positive (scaled-ratio geometry)");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("grid: nodes must be strictly increasing");
  }
}

// Monotone [0,1] table from raw quotient values: guards float noise, does
// not repair genuinely non-monotone data beyond it.
Distribution monotone_table(std::vector<double> nodes,
                            std::vector<double> values) {
  for (double& v : values) v = std::clamp(v, 0.0, 1.0);
  for (std::size_t i = 1; i < values.size(); ++i)
    values[i] = std::max(values[i], values[i - 1]);
  return Distribution::tabulated(std::move(nodes), std::move(values));
}

}  // namespace

RecoveryResult recover_kotlarski(const JointCdf2D& g,
                                 std::span<const double> grid,
                                 double denominator_floor) {
  validate_grid(grid, false);
  if (!(denominator_floor > 0.0))
    throw std::invalid_argument("recover_kotlarski: floor must be positive");
  std::vector<double> nodes, f0, f1, f2, skipped;
  for (double t : grid) {
    double diag = g.eval(t, t);
    double fy1 = g.eval(t, kInf);
    double fy2 = g.eval(kInf, t);
    if (diag <= denominator_floor || fy1 <= denominator_floor ||
        fy2 <= denominator_floor) {
      skipped.push_back(t);
      continue;
    }
    nodes.push_back(t);
    f0.push_back(fy1 * fy2 / diag);
    f1.push_back(diag / fy2);
    f2.push_back(diag / fy1);
  }
  if (nodes.size() < 2)
    throw std::invalid_argument(
        "recover_kotlarski: fewer than two grid nodes above the floor");

  RecoveryResult out{monotone_table(nodes, f1), monotone_table(nodes, f2),
                     monotone_table(nodes, f0), 0.0, SolverReport{}, skipped};
  out.report.method = "kotlarski-closed-form";
  out.report.probe_count = nodes.size();
  double worst = 0.0;
  for (double t1 : nodes)
    for (double t2 : nodes) {
      double model = joint_cdf_kotlarski(out.fz1_hat, out.fx_hat, out.fy_hat,
                                         t1, t2);
      worst = std::max(worst, std::abs(model - g.eval(t1, t2)));
    }
  out.sup_residual = worst;
  return out;
}

Distribution region_quotient_fz1(const JointCdf2D& g,
                                 const ScaleCoefficients& coeffs,
                                 std::span<const double> grid,
                                 double denominator_floor) {
  if (coeffs.regime != Regime::all_positive)
    throw std::invalid_argument(
        "region_quotient_fz1: coefficients must be all-positive");
  validate_grid(grid, true);
  if (!(denominator_floor > 0.0))
    throw std::invalid_argument("region_quotient_fz1: floor must be positive");

  // Probe family (p1*s, p2*sigma) eliminates one quotient factor when
  // sigma/s lies in the window [lo, hi]; see header.
  struct Orientation {
    double lo, hi, p1, p2;
  };
  const double a = coeffs.a, b = coeffs.b, c = coeffs.c, d = coeffs.d;
  const Orientation orients[2] = {{b / a, d / c, b, c}, {a / b, c / d, a, d}};
  const double wtol = 1e-12;
  const Orientation* chosen = nullptr;
  bool diagonal = false;
  for (const Orientation& o : orients) {
    if (o.lo > o.hi * (1 + wtol)) continue;  // empty window
    if (o.lo <= 1 + wtol && 1 <= o.hi * (1 + wtol)) {
      chosen = &o;
      diagonal = true;
      break;
    }
    if (o.hi >= 1.001) {  // enough multiplicative progress per step
      chosen = &o;
      diagonal = false;
      break;
    }
  }
  if (!chosen)
    throw std::invalid_argument(
        "region_quotient_fz1: probe region is empty or lies below the "
        "diagonal for these coefficients; use recover_positive_general");

  auto quotient = [&](double s, double sigma, bool& ok) {
    double t1 = chosen->p1 * s, t2 = chosen->p2 * sigma;
    double fu = g.eval(t1, kInf);
    double fv = g.eval(kInf, t2);
    double gg = g.eval(t1, t2);
    if (fu <= denominator_floor || fv <= denominator_floor ||
        gg <= denominator_floor) {
      ok = false;
      return 0.0;
    }
    ok = true;
    return fu * fv / gg;
  };

  std::vector<double> nodes, values;
  for (double s : grid) {
    bool ok = true;
    double f;
    if (diagonal) {
      double q = quotient(s, s, ok);
      f = ok ? std::sqrt(q) : 0.0;
    } else {
      // F(s) F(r s) = Q(s); alternating log sum toward the boundary, where
      // the remainder factor tends to 1.
      const double r = chosen->hi;
      double log_f = 0.0, sign = 1.0, sk = s;
      for (int k = 0; k < 600; ++k) {
        double q = quotient(sk, r * sk, ok);
        if (!ok) break;
        double lq = std::log(q);
        log_f += sign * lq;
        if (std::abs(lq) < 1e-16) break;
        sign = -sign;
        sk *= r;
      }
      f = ok ? std::exp(log_f) : 0.0;
    }
    if (!ok || !std::isfinite(f) || !(f > 0.0)) continue;
    nodes.push_back(s);
    values.push_back(f);
  }
  if (nodes.size() < 2)
    throw std::invalid_argument(
        "region_quotient_fz1: fewer than two grid nodes above the floor");
  return monotone_table(std::move(nodes), std::move(values));
}

namespace {

struct Probe {
  std::uint32_t i, j;  // unknown indices in the node set
  double t1, t2;       // evaluation coordinates
  double k = 0.0;      // log F_U(t1) + log F_V(t2) - log G(t1,t2)
  bool usable = false;
};

// Least-squares core shared by the independent and generator-divided paths.
// eval must behave like a joint CDF; a return value <= floor marks the
// point unusable (used by the beta-floor guard).
RecoveryResult recover_core(const std::function<double(double, double)>& eval,
                            const ScaleCoefficients& coeffs,
                            std::span<const double> grid,
                            const GridSolverConfig& config, Exec exec,
                            const char* method) {
  if (coeffs.regime != Regime::all_positive)
    throw std::invalid_argument(
        "recover_positive_general: coefficients must be all-positive");
  validate_grid(grid, true);
  if (config.starts < 1 || config.max_iterations < 1 ||
      !(config.denominator_floor > 0.0) || !(config.agreement_tol > 0.0) ||
      !(config.objective_decrease_tol >= 0.0))
    throw std::invalid_argument("solver config: invalid field");
  const double floor_ = config.denominator_floor;
  const double log_floor = std::log(floor_);
  const double a = coeffs.a, b = coeffs.b, c = coeffs.c, d = coeffs.d;

  // Node set: union of the four scaled grids, deduplicated.
  const std::size_t n = grid.size();
  std::vector<double> s_all;
  s_all.reserve(4 * n);
  for (double t : grid) {
    s_all.push_back(t / a);
    s_all.push_back(t / b);
    s_all.push_back(t / c);
    s_all.push_back(t / d);
  }
  std::sort(s_all.begin(), s_all.end());
  std::vector<double> S;
  for (double s : s_all)
    if (S.empty() || s > S.back() * (1 + 1e-12)) S.push_back(s);
  const std::size_t m = S.size();
  auto node_index = [&](double s) {
    auto it = std::lower_bound(S.begin(), S.end(), s * (1 - 1e-12));
    return static_cast<std::uint32_t>(it - S.begin());
  };
  std::vector<std::uint32_t> ia(n), ib(n), ic(n), id(n);
  for (std::size_t k = 0; k < n; ++k) {
    ia[k] = node_index(grid[k] / a);
    ib[k] = node_index(grid[k] / b);
    ic[k] = node_index(grid[k] / c);
    id[k] = node_index(grid[k] / d);
  }

  // Probe pairs: (t1,t2) = (b s_i, c s_j) pins the quotient to
  // F_Z1(s_i) F_Z1(s_j) when s_j/s_i is in [b/a, d/c]; the mirrored family
  // (a s_i, d s_j) covers [a/b, c/d].
  struct Window {
    double lo, hi, p1, p2;
    bool valid;
  };
  const double wtol = 1e-12;
  const Window windows[2] = {
      {b / a, d / c, b, c, b / a <= (d / c) * (1 + wtol)},
      {a / b, c / d, a, d, a / b <= (c / d) * (1 + wtol)}};
  std::vector<Probe> probes;
  for (std::uint32_t i = 0; i < m; ++i) {
    for (std::uint32_t j = 0; j < m; ++j) {
      double ratio = S[j] / S[i];
      for (const Window& w : windows) {
        if (!w.valid) continue;
        if (ratio >= w.lo * (1 - wtol) && ratio <= w.hi * (1 + wtol))
          probes.push_back({i, j, w.p1 * S[i], w.p2 * S[j], 0.0, false});
      }
    }
  }
  const std::size_t cap = config.max_probes ? config.max_probes : 20000;
  if (probes.size() > cap) {
    // Fixed golden-ratio subsample: reproducible and spread over the list.
    std::vector<std::size_t> keep(cap);
    const double phi = 0.6180339887498949;
    double frac = 0.0;
    for (std::size_t k = 0; k < cap; ++k) {
      frac += phi;
      frac -= std::floor(frac);
      keep[k] = static_cast<std::size_t>(frac * static_cast<double>(probes.size()));
    }
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    std::vector<Probe> sub;
    sub.reserve(keep.size());
    for (std::size_t idx : keep) sub.push_back(probes[idx]);
    probes = std::move(sub);
  }

  // Marginal caches over scaled nodes, then probe constants.
  std::vector<double> fu_b(m), fu_a(m), fv_c(m), fv_d(m);
  for_each_index(m, exec, [&](std::size_t i) {
    fu_b[i] = eval(b * S[i], kInf);
    fu_a[i] = eval(a * S[i], kInf);
    fv_c[i] = eval(kInf, c * S[i]);
    fv_d[i] = eval(kInf, d * S[i]);
  });
  for_each_index(probes.size(), exec, [&](std::size_t p) {
    Probe& pr = probes[p];
    bool first = pr.t1 == b * S[pr.i];  // which family produced the probe
    double fu = first ? fu_b[pr.i] : fu_a[pr.i];
    double fv = first ? fv_c[pr.j] : fv_d[pr.j];
    double gg = eval(pr.t1, pr.t2);
    if (fu <= floor_ || fv <= floor_ || gg <= floor_) return;
    pr.k = std::log(fu) + std::log(fv) - std::log(gg);
    pr.usable = true;
  });
  std::size_t requested = probes.size();
  probes.erase(std::remove_if(probes.begin(), probes.end(),
                              [](const Probe& p) { return !p.usable; }),
               probes.end());
  const std::size_t np = probes.size();
  if (np == 0)
    throw std::invalid_argument(
        "recover_positive_general: no probe pairs above the floor");

  std::vector<char> touched(m, 0);
  for (const Probe& p : probes) touched[p.i] = touched[p.j] = 1;

  // Step size 1/L with L = 2 lambda_max(A^T A) by power iteration.
  std::vector<double> v(m), av(np), w(m);
  for (std::size_t k = 0; k < m; ++k)
    v[k] = 0.5 + rng::uniform_open(0x9e3779b9, 0, k);
  double lambda_max = 1.0;
  for (int it = 0; it < 80; ++it) {
    for (std::size_t p = 0; p < np; ++p)
      av[p] = v[probes[p].i] + v[probes[p].j];
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t p = 0; p < np; ++p) {
      w[probes[p].i] += av[p];
      w[probes[p].j] += av[p];
    }
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) break;
    lambda_max = norm;
    for (std::size_t k = 0; k < m; ++k) v[k] = w[k] / norm;
  }
  const double step = 1.0 / (2.0 * lambda_max * 1.05);

  auto objective = [&](const std::vector<double>& phi) {
    double f = 0.0;
    for (const Probe& p : probes) {
      double r = p.k - phi[p.i] - phi[p.j];
      f += r * r;
    }
    return f;
  };

  struct StartOut {
    std::vector<double> phi;
    StartReport rep;
    std::vector<double> trace;
  };
  const std::size_t total_starts =
      static_cast<std::size_t>(config.starts) + config.extra_initializers.size();
  std::vector<StartOut> outs(total_starts);

  for_each_index(total_starts, exec, [&](std::size_t si) {
    std::vector<double> x(m);
    if (si < static_cast<std::size_t>(config.starts)) {
      double gamma = std::pow(
          2.0, static_cast<double>(si) -
                   (static_cast<double>(config.starts) - 1.0) / 2.0);
      for (std::size_t k = 0; k < m; ++k)
        x[k] = gamma * std::log((static_cast<double>(k) + 1.0) /
                                (static_cast<double>(m) + 1.0));
    } else {
      const Distribution& init =
          config.extra_initializers[si - static_cast<std::size_t>(config.starts)];
      for (std::size_t k = 0; k < m; ++k)
        x[k] = std::log(std::max(init.cdf(S[k]), floor_));
    }
    isotonic_increasing_clamped(x, log_floor, 0.0);

    std::vector<double> y = x, grad(m), xn(m);
    double f_cur = objective(x);
    double t_mom = 1.0;
    StartOut& out = outs[si];
    out.trace.push_back(f_cur);
    bool converged = false;
    int iters = 0;
    for (int it = 1; it <= config.max_iterations; ++it) {
      iters = it;
      std::fill(grad.begin(), grad.end(), 0.0);
      for (const Probe& p : probes) {
        double r = p.k - y[p.i] - y[p.j];
        grad[p.i] -= 2.0 * r;
        grad[p.j] -= 2.0 * r;
      }
      for (std::size_t k = 0; k < m; ++k) xn[k] = y[k] - step * grad[k];
      isotonic_increasing_clamped(xn, log_floor, 0.0);
      double f_new = objective(xn);
      if (f_new > f_cur) {
        if (t_mom == 1.0) {  // plain projected step cannot ascend off-optimum
          converged = true;
          break;
        }
        t_mom = 1.0;  // momentum overshoot: restart from x
        y = x;
        continue;
      }
      double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_mom * t_mom));
      double beta_mom = (t_mom - 1.0) / t_next;
      for (std::size_t k = 0; k < m; ++k)
        y[k] = xn[k] + beta_mom * (xn[k] - x[k]);
      bool small = (f_cur - f_new) < config.objective_decrease_tol;
      x = xn;
      f_cur = f_new;
      t_mom = t_next;
      out.trace.push_back(f_cur);
      if (small) {
        converged = true;
        break;
      }
    }
    out.phi = std::move(x);
    out.rep = {f_cur, iters, converged};
  });

  std::size_t best = 0;
  for (std::size_t si = 1; si < total_starts; ++si)
    if (outs[si].rep.objective < outs[best].rep.objective) best = si;
  double agreement = 0.0;
  for (std::size_t s1 = 0; s1 < total_starts; ++s1)
    for (std::size_t s2 = s1 + 1; s2 < total_starts; ++s2)
      for (std::size_t k = 0; k < m; ++k)
        if (touched[k])
          agreement = std::max(
              agreement, std::abs(std::exp(outs[s1].phi[k]) -
                                  std::exp(outs[s2].phi[k])));

  const std::vector<double>& phi = outs[best].phi;
  std::vector<double> fz(m);
  for (std::size_t k = 0; k < m; ++k) fz[k] = std::exp(phi[k]);

  std::vector<double> grid_nodes(grid.begin(), grid.end());
  std::vector<double> fx_vals(n), fy_vals(n);
  for (std::size_t k = 0; k < n; ++k) {
    double fu = eval(grid[k], kInf);
    double fv = eval(kInf, grid[k]);
    fx_vals[k] = fu / std::max(fz[ia[k]] * fz[ib[k]], 1e-24);
    fy_vals[k] = fv / std::max(fz[ic[k]] * fz[id[k]], 1e-24);
  }

  RecoveryResult out{monotone_table(grid_nodes, fx_vals),
                     monotone_table(grid_nodes, fy_vals),
                     monotone_table(S, fz),
                     0.0,
                     SolverReport{},
                     {}};
  SolverReport& rep = out.report;
  rep.method = method;
  rep.best_start = static_cast<int>(best);
  rep.multistart_agreement = agreement;
  rep.agreed = agreement <= config.agreement_tol;
  rep.probe_count = np;
  rep.skipped_probes = requested - np;
  rep.unknown_count = m;
  for (const StartOut& so : outs) rep.starts.push_back(so.rep);
  rep.objective_trace = outs[best].trace;

  std::vector<double> dev(n * n);
  for_each_index(n * n, exec, [&](std::size_t flat) {
    double t1 = grid[flat / n], t2 = grid[flat % n];
    double model = out.fx_hat.cdf(t1) * out.fy_hat.cdf(t2) *
                   out.fz1_hat.cdf(std::min(t1 / a, t2 / c)) *
                   out.fz1_hat.cdf(std::min(t1 / b, t2 / d));
    double target = eval(t1, t2);
    dev[flat] = target <= floor_ ? 0.0 : std::abs(model - target);
  });
  out.sup_residual = *std::max_element(dev.begin(), dev.end());
  return out;
}

}  // namespace

RecoveryResult recover_positive_general(const JointCdf2D& g,
                                        const ScaleCoefficients& coeffs,
                                        std::span<const double> grid,
                                        const GridSolverConfig& config,
                                        Exec exec) {
  auto eval = [&g](double t1, double t2) { return g.eval(t1, t2); };
  return recover_core(eval, coeffs, grid, config, exec, "grid-lsq");
}

RecoveryResult recover_maxind(const JointCdf2D& g,
                              const ScaleCoefficients& coeffs,
                              const GeneratorSpec& gen,
                              const Marginals4& gen_marginals,
                              std::span<const double> grid,
                              const GridSolverConfig& config, Exec exec) {
  if (gen.family() == GeneratorSpec::Family::fgm &&
      !(gen.alpha() > -1.0 && gen.alpha() <= 0.0))
    throw std::invalid_argument("recover_maxind: fgm alpha must lie in (-1, 0]");
  const double floor_ = config.denominator_floor;
  const double a = coeffs.a, b = coeffs.b, c = coeffs.c, d = coeffs.d;
  auto eval = [&, floor_](double t1, double t2) {
    double m1 = std::min(t1 / a, t2 / c);
    double m2 = std::min(t1 / b, t2 / d);
    double beta = beta_eval(gen, gen_marginals, t1, t2, m1, m2);
    if (beta <= floor_) return 0.0;  // flagged unusable by the core's guard
    return g.eval(t1, t2) / beta;
  };
  return recover_core(eval, coeffs, grid, config, exec, "grid-lsq-maxind");
}

RatioDiagnostics ratio_diagnostics(const ComponentSystem& system_a,
                                   const ComponentSystem& system_b,
                                   const ScaleCoefficients& coeffs,
                                   std::span<const double> grid,
                                   double denominator_floor, Exec exec) {
  if (coeffs.regime != Regime::all_positive)
    throw std::invalid_argument(
        "ratio_diagnostics: coefficients must be all-positive");
  if (!same_interval(system_a.fx().support(), system_b.fx().support()))
    throw std::invalid_argument("ratio_diagnostics: systems must share support");
  validate_grid(grid, true);
  if (!(denominator_floor > 0.0))
    throw std::invalid_argument("ratio_diagnostics: floor must be positive");

  auto ratio = [&](const Distribution& fa, const Distribution& fb, double t) {
    double na = fa.cdf(t), nb = fb.cdf(t);
    if (na <= denominator_floor || nb <= denominator_floor) return kNaN;
    return na / nb;
  };

  const std::size_t n = grid.size();
  RatioDiagnostics out;
  out.lambda = coeffs.lambda();
  out.grid.assign(grid.begin(), grid.end());
  out.eta1 = {out.grid, std::vector<double>(n)};
  out.eta2 = {out.grid, std::vector<double>(n)};
  out.eta3 = {out.grid, std::vector<double>(n)};
  out.zeta = {out.grid, std::vector<double>(n)};
  out.residual_product.assign(n * n, kNaN);
  out.residual_antiperiodic.assign(n, kNaN);

  for_each_index(n, exec, [&](std::size_t k) {
    double t = grid[k];
    out.eta1.values[k] = ratio(system_a.fx(), system_b.fx(), t);
    out.eta2.values[k] = ratio(system_a.fy(), system_b.fy(), t);
    out.eta3.values[k] = ratio(system_a.fz1(), system_b.fz1(), t);
    out.zeta.values[k] = std::log(out.eta3.values[k]);
    double e_u = out.eta3.values[k];
    double e_lu = ratio(system_a.fz1(), system_b.fz1(), out.lambda * t);
    out.residual_antiperiodic[k] = std::abs(std::log(e_u) + std::log(e_lu));
  });

  const double a = coeffs.a, b = coeffs.b, c = coeffs.c, d = coeffs.d;
  for_each_index(n * n, exec, [&](std::size_t flat) {
    double t1 = grid[flat / n], t2 = grid[flat % n];
    double m1 = std::min(t1 / a, t2 / c);
    double m2 = std::min(t1 / b, t2 / d);
    double e1 = ratio(system_a.fx(), system_b.fx(), t1);
    double e2 = ratio(system_a.fy(), system_b.fy(), t2);
    double e3m1 = ratio(system_a.fz1(), system_b.fz1(), m1);
    double e3m2 = ratio(system_a.fz1(), system_b.fz1(), m2);
    out.residual_product[flat] = std::abs(e1 * e2 * e3m1 * e3m2 - 1.0);
  });

  for (double r : out.residual_product) {
    if (std::isnan(r))
      ++out.skipped;
    else
      out.max_residual_product = std::max(out.max_residual_product, r);
  }
  for (double r : out.residual_antiperiodic) {
    if (std::isnan(r))
      ++out.skipped;
    else
      out.max_residual_antiperiodic =
          std::max(out.max_residual_antiperiodic, r);
  }
  return out;
}

AntiperiodicResult antiperiodic_vanishing_check(const TabulatedFunction& zeta,
                                                double lambda,
                                                bool boundary_decay,
                                                double pair_tol,
                                                double vanish_tol) {
  const std::size_t n = zeta.nodes.size();
  if (n < 2 || zeta.values.size() != n)
    throw std::invalid_argument("antiperiodic check: malformed table");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(zeta.nodes[i] > 0.0) || !std::isfinite(zeta.nodes[i]))
      throw std::invalid_argument("antiperiodic check: nodes must be positive");
    if (i > 0 && !(zeta.nodes[i] > zeta.nodes[i - 1]))
      throw std::invalid_argument("antiperiodic check: nodes must increase");
    if (!std::isfinite(zeta.values[i]))
      throw std::invalid_argument("antiperiodic check: non-finite value");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("antiperiodic check: lambda must be positive");
  if (lambda < 1.0) lambda = 1.0 / lambda;  // pairs (u, lambda u) are symmetric

  AntiperiodicResult out;
  for (double v : zeta.values)
    out.max_abs_zeta = std::max(out.max_abs_zeta, std::abs(v));

  if (lambda == 1.0) {
    // No decay leverage from iterating; decide by the direct zeta == 0 test.
    out.verdict = out.max_abs_zeta <= vanish_tol
                      ? AntiperiodicVerdict::vanishes
                      : AntiperiodicVerdict::inconclusive;
    return out;
  }

  // lambda-closure: every node whose image stays in range must hit a node.
  std::vector<std::ptrdiff_t> partner(n, -1);
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double target = lambda * zeta.nodes[i];
    if (target > zeta.nodes.back() * (1 + 1e-9)) continue;
    auto it = std::lower_bound(zeta.nodes.begin(), zeta.nodes.end(),
                               target * (1 - 1e-9));
    if (it == zeta.nodes.end() || std::abs(*it - target) > 1e-9 * target)
      throw std::invalid_argument(
          "antiperiodic check: grid not closed under multiplication by "
          "lambda");
    partner[i] = it - zeta.nodes.begin();
    ++pairs;
  }
  if (pairs == 0)
    throw std::invalid_argument(
        "antiperiodic check: grid spans less than one lambda step");

  std::size_t worst_i = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (partner[i] < 0) continue;
    double r = std::abs(zeta.values[i] +
                        zeta.values[static_cast<std::size_t>(partner[i])]);
    if (r > out.worst_pair_residual) {
      out.worst_pair_residual = r;
      worst_i = i;
    }
  }
  if (out.worst_pair_residual > pair_tol) {
    out.verdict = AntiperiodicVerdict::violated;
    out.witness = zeta.nodes[worst_i];
    return out;
  }

  // Relation holds on the grid; walk each chain u -> lambda u to its end.
  std::vector<char> has_pred(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (partner[i] >= 0) has_pred[static_cast<std::size_t>(partner[i])] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (has_pred[i]) continue;
    std::size_t k = i;
    while (partner[k] >= 0) k = static_cast<std::size_t>(partner[k]);
    out.max_terminal_magnitude =
        std::max(out.max_terminal_magnitude, std::abs(zeta.values[k]));
  }

  if (out.max_abs_zeta <= vanish_tol ||
      (boundary_decay && out.max_terminal_magnitude <= vanish_tol))
    out.verdict = AntiperiodicVerdict::vanishes;
  else
    out.verdict = AntiperiodicVerdict::inconclusive;
  return out;
}

JointCdf2D smooth_empirical(const JointCdf2D& g, double bandwidth,
                            std::span<const double> t1_nodes,
                            std::span<const double> t2_nodes, Exec exec) {
  if (g.kind() != JointCdf2D::Kind::empirical)
    throw std::invalid_argument("smooth_empirical: input must be empirical");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    throw std::invalid_argument("smooth_empirical: bandwidth must be positive");
  validate_grid(t1_nodes, false);
  validate_grid(t2_nodes, false);
  // Integrated Epanechnikov kernel.
  auto W = [](double x) {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return 0.5 + 0.75 * (x - x * x * x / 3.0);
  };
  const auto& us = g.us();
  const auto& vs = g.vs();
  const double inv_n = 1.0 / static_cast<double>(us.size());
  const std::size_t n1 = t1_nodes.size(), n2 = t2_nodes.size();
  std::vector<double> values(n1 * n2);
  for_each_index(n1 * n2, exec, [&](std::size_t flat) {
    double t1 = t1_nodes[flat / n2], t2 = t2_nodes[flat % n2];
    double acc = 0.0;
    for (std::size_t i = 0; i < us.size(); ++i)
      acc += W((t1 - us[i]) / bandwidth) * W((t2 - vs[i]) / bandwidth);
    values[flat] = std::min(acc * inv_n, 1.0);
  });
  return JointCdf2D::tabulated(
      std::vector<double>(t1_nodes.begin(), t1_nodes.end()),
      std::vector<double>(t2_nodes.begin(), t2_nodes.end()),
      std::move(values));
}

}  // namespace maxident
