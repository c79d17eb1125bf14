// Batch front-end: simulate joint samples, evaluate joint CDFs, run the
// recovery and diagnostic operations, explore mixed-sign alternatives, and
// validate generators. One JSON config document drives each command; flags
// carry only paths and the seed override. Exit codes: 0 success, 1 config or
// hypothesis violation, 2 I/O or malformed input, 3 recovery ambiguity,
// 4 check failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "maxident/identification.hpp"
#include "maxident/joint_cdf.hpp"
#include "maxident/nonuniqueness.hpp"
#include "maxident/serialization.hpp"
#include "maxident/version.hpp"

namespace {

using nlohmann::json;
using namespace maxident;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Ctx {
  json config;
  std::string config_hash;
  std::string out_path;
  std::string samples_path;
  std::string probes_path;
  std::optional<std::uint64_t> seed_override;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << bytes;
  if (!out) throw IoError("write failed for " + path);
}

// Main artifact goes to --out when given (with a one-line summary on
// stdout), otherwise to stdout directly.
void emit(const Ctx& ctx, const std::string& artifact, json summary) {
  summary["version"] = kVersion;
  summary["config_hash"] = ctx.config_hash;
  if (ctx.out_path.empty()) {
    std::cout << artifact;
    if (artifact.empty() || artifact.back() != '\n') std::cout << '\n';
  } else {
    write_file(ctx.out_path, artifact);
    summary["out"] = ctx.out_path;
    std::cout << summary.dump(2) << '\n';
  }
}

json report_root(const Ctx& ctx) {
  return {{"version", kVersion}, {"config_hash", ctx.config_hash}};
}

std::string csv_banner(const Ctx& ctx) {
  return "# version=" + std::string(kVersion) +
         " config_hash=" + ctx.config_hash + "\n";
}

const json& need(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument(std::string("config: missing \"") + key +
                                "\"");
  return *it;
}

std::vector<double> build_grid(const json& spec) {
  if (spec.contains("nodes")) {
    auto nodes = spec.at("nodes").get<std::vector<double>>();
    if (nodes.size() < 2)
      throw std::invalid_argument("grid.nodes: need at least two nodes");
    return nodes;
  }
  auto count = need(spec, "count").get<std::size_t>();
  double lo = need(spec, "min").get<double>();
  double hi = need(spec, "max").get<double>();
  std::string spacing = spec.value("spacing", "linear");
  if (count < 2 || !(lo < hi))
    throw std::invalid_argument("grid: need count >= 2 and min < max");
  std::vector<double> nodes(count);
  if (spacing == "linear") {
    for (std::size_t k = 0; k < count; ++k)
      nodes[k] = lo + (hi - lo) * static_cast<double>(k) /
                          static_cast<double>(count - 1);
  } else if (spacing == "log") {
    if (!(lo > 0.0))
      throw std::invalid_argument("grid: log spacing needs min > 0");
    double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t k = 0; k < count; ++k)
      nodes[k] = std::exp(llo + (lhi - llo) * static_cast<double>(k) /
                                    static_cast<double>(count - 1));
  } else {
    throw std::invalid_argument("grid: unknown spacing \"" + spacing + "\"");
  }
  return nodes;
}

GridSolverConfig solver_config(const json& config) {
  GridSolverConfig sc;
  if (!config.contains("solver")) return sc;
  const json& j = config.at("solver");
  sc.starts = j.value("starts", sc.starts);
  sc.max_iterations = j.value("max_iterations", sc.max_iterations);
  sc.objective_decrease_tol =
      j.value("objective_decrease_tol", sc.objective_decrease_tol);
  sc.agreement_tol = j.value("agreement_tol", sc.agreement_tol);
  sc.denominator_floor = j.value("denominator_floor", sc.denominator_floor);
  sc.max_probes = j.value("max_probes", sc.max_probes);
  return sc;
}

std::uint64_t pick_seed(const Ctx& ctx) {
  if (ctx.seed_override) return *ctx.seed_override;
  return ctx.config.value("seed", std::uint64_t{0});
}

std::vector<std::pair<double, double>> read_pairs(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::pair<double, double>> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw IoError("");
      pairs.emplace_back(std::stod(line.substr(0, comma)),
                         std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      if (lineno <= 2 && pairs.empty()) continue;  // header row
      throw IoError(path + ": malformed row " + std::to_string(lineno));
    }
  }
  if (pairs.empty()) throw IoError(path + ": no data rows");
  return pairs;
}

int cmd_simulate(const Ctx& ctx) {
  ComponentSystem system = io::system_from_json(need(ctx.config, "system"));
  ScaleCoefficients coeffs =
      io::coefficients_from_json(need(ctx.config, "coefficients"));
  auto n = ctx.config.value("samples", std::size_t{10000});
  if (n == 0) throw std::invalid_argument("config: samples must be positive");
  std::uint64_t seed = pick_seed(ctx);
  if (ctx.out_path.empty())
    throw std::invalid_argument("simulate: --out is required");
  auto pairs = sample_joint(system, coeffs, n, seed);
  write_file(ctx.out_path, csv_banner(ctx) + io::pairs_csv(pairs));
  json summary = report_root(ctx);
  summary["command"] = "simulate";
  summary["n"] = n;
  summary["seed"] = seed;
  summary["regime"] = coeffs.regime == Regime::all_positive ? "all_positive"
                                                            : "mixed_sign";
  summary["out"] = ctx.out_path;
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int cmd_cdf(const Ctx& ctx) {
  ComponentSystem system = io::system_from_json(need(ctx.config, "system"));
  ScaleCoefficients coeffs =
      io::coefficients_from_json(need(ctx.config, "coefficients"));
  JointCdf2D g = JointCdf2D::analytic(system, coeffs);

  std::vector<std::pair<double, double>> probes;
  if (!ctx.probes_path.empty()) {
    probes = read_pairs(ctx.probes_path);
  } else if (ctx.config.contains("probes")) {
    for (const json& row : ctx.config.at("probes")) {
      if (!row.is_array() || row.size() != 2)
        throw std::invalid_argument("config: probes must be [t1, t2] pairs");
      probes.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
  } else {
    throw std::invalid_argument("cdf: need --probes or a probes config list");
  }

  std::string csv = csv_banner(ctx) + "t1,t2,g\n";
  for (auto [t1, t2] : probes)
    csv += io::format_double(t1) + "," + io::format_double(t2) + "," +
           io::format_double(g.eval(t1, t2)) + "\n";
  json summary = report_root(ctx);
  summary["command"] = "cdf";
  summary["probes"] = probes.size();
  emit(ctx, csv, summary);
  return 0;
}

int cmd_recover(const Ctx& ctx) {
  ComponentSystem system = io::system_from_json(need(ctx.config, "system"));
  ScaleCoefficients coeffs =
      io::coefficients_from_json(need(ctx.config, "coefficients"));
  if (coeffs.regime != Regime::all_positive)
    throw std::invalid_argument(
        "recover: requires all-positive coefficients; mixed-sign analysis "
        "lives in the counterexample command");
  std::vector<double> grid = build_grid(need(ctx.config, "grid"));
  const json& rc = need(ctx.config, "recover");
  std::string method = need(rc, "method").get<std::string>();
  std::string input = rc.value("input", "analytic");

  JointCdf2D g = [&] {
    if (input == "samples") {
      std::string path = !ctx.samples_path.empty()
                             ? ctx.samples_path
                             : rc.value("samples_path", std::string{});
      if (path.empty())
        throw std::invalid_argument(
            "recover: samples input needs --samples or recover.samples_path");
      return JointCdf2D::empirical(read_pairs(path));
    }
    if (input != "analytic")
      throw std::invalid_argument("recover: unknown input \"" + input + "\"");
    if (method == "kotlarski")
      return JointCdf2D::kotlarski(system.fz1(), system.fx(), system.fy());
    return JointCdf2D::analytic(system, coeffs);
  }();

  json report = report_root(ctx);
  report["command"] = "recover";
  report["method"] = method;
  int code = 0;
  if (method == "kotlarski") {
    RecoveryResult result = recover_kotlarski(g, grid);
    report["result"] = io::to_json(result);
  } else if (method == "region-quotient") {
    Distribution fz1 = region_quotient_fz1(g, coeffs, grid);
    report["fz1_hat"] = io::to_json(fz1);
  } else if (method == "general" || method == "maxind") {
    GridSolverConfig sc = solver_config(ctx.config);
    RecoveryResult result = [&] {
      if (method == "general")
        return recover_positive_general(g, coeffs, grid, sc);
      GeneratorSpec gen = io::generator_from_json(need(rc, "generator"));
      Marginals4 marginals = system.quadruple();
      if (rc.contains("generator_marginals")) {
        const json& gm = rc.at("generator_marginals");
        if (!gm.is_array() || gm.size() != 4)
          throw std::invalid_argument(
              "recover.generator_marginals must hold 4 distributions");
        marginals = {io::distribution_from_json(gm[0]),
                     io::distribution_from_json(gm[1]),
                     io::distribution_from_json(gm[2]),
                     io::distribution_from_json(gm[3])};
      }
      return recover_maxind(g, coeffs, gen, marginals, grid, sc);
    }();
    report["result"] = io::to_json(result);
    if (!result.report.agreed) {
      report["ambiguity"] =
          "multistarts disagree beyond tolerance: the fit is not unique on "
          "this input. The uniqueness theory assumes a continuously "
          "differentiable common-factor CDF on a shared support; non-smooth "
          "or noisy inputs can void it.";
      code = 3;
    }
  } else {
    throw std::invalid_argument("recover: unknown method \"" + method + "\"");
  }
  emit(ctx, report.dump(2) + "\n", json{{"command", "recover"}});
  return code;
}

int cmd_diagnose(const Ctx& ctx) {
  ComponentSystem system_a = io::system_from_json(need(ctx.config, "system"));
  ComponentSystem system_b =
      io::system_from_json(need(ctx.config, "system_b"));
  ScaleCoefficients coeffs =
      io::coefficients_from_json(need(ctx.config, "coefficients"));
  std::vector<double> grid = build_grid(need(ctx.config, "grid"));
  double threshold = 1e-8;
  if (ctx.config.contains("diagnose"))
    threshold = ctx.config.at("diagnose").value("threshold", threshold);

  RatioDiagnostics diag = ratio_diagnostics(system_a, system_b, coeffs, grid);
  json summary = report_root(ctx);
  summary["command"] = "diagnose";
  summary["max_residual_product"] = diag.max_residual_product;
  summary["max_residual_antiperiodic"] = diag.max_residual_antiperiodic;
  summary["skipped"] = diag.skipped;
  summary["threshold"] = threshold;
  bool ok = diag.max_residual_product <= threshold;
  summary["equivalent_on_grid"] = ok;
  emit(ctx, csv_banner(ctx) + io::diagnostics_csv(diag), summary);
  return ok ? 0 : 4;
}

int cmd_counterexample(const Ctx& ctx) {
  ComponentSystem system = io::system_from_json(need(ctx.config, "system"));
  ScaleCoefficients coeffs =
      io::coefficients_from_json(need(ctx.config, "coefficients"));
  std::vector<double> grid = build_grid(need(ctx.config, "grid"));
  const json& cc = need(ctx.config, "counterexample");
  double tol = cc.value("equivalence_tolerance", 1e-9);
  const json& list = need(cc, "s1_candidates");
  if (!list.is_array() || list.empty())
    throw std::invalid_argument(
        "counterexample: s1_candidates must be a nonempty array");

  json rows = json::array();
  std::size_t equivalent = 0, nonidentity_equivalent = 0;
  for (const json& spec : list) {
    Distribution s1 = io::distribution_from_json(spec);
    AlternativeCandidate cand =
        construct_alternative(system, coeffs, s1, grid, tol);
    json row = io::to_json(cand);
    if (cand.equivalence && cand.equivalence->equivalent) {
      ++equivalent;
      if (!(s1 == system.fz1())) ++nonidentity_equivalent;
    }
    rows.push_back(std::move(row));
  }
  json report = report_root(ctx);
  report["command"] = "counterexample";
  report["candidates"] = std::move(rows);
  report["equivalent_count"] = equivalent;
  report["nonidentity_equivalent_count"] = nonidentity_equivalent;
  emit(ctx, report.dump(2) + "\n", json{{"command", "counterexample"}});
  return 0;
}

int cmd_validate_generator(const Ctx& ctx) {
  GeneratorSpec gen = io::generator_from_json(need(ctx.config, "generator"));
  const json& gm = need(ctx.config, "marginals");
  if (!gm.is_array() || gm.size() != 4)
    throw std::invalid_argument("config: marginals must hold 4 distributions");
  Marginals4 marginals = {
      io::distribution_from_json(gm[0]), io::distribution_from_json(gm[1]),
      io::distribution_from_json(gm[2]), io::distribution_from_json(gm[3])};
  auto points = ctx.config.value("points_per_axis", std::size_t{7});

  GeneratorValidation val = validate_generator(gen, marginals, points);
  json report = report_root(ctx);
  report["command"] = "validate-generator";
  report["validation"] = io::to_json(val);
  emit(ctx, report.dump(2) + "\n", json{{"command", "validate-generator"}});
  return val.passed ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maxima identification toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path, samples_path, probes_path;
  std::int64_t seed = 0;
  bool seed_given = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config document")
        ->required();
    sub->add_option("--out", out_path, "output path (default: stdout)");
    sub->add_option("--seed", seed, "seed override")
        ->each([&](const std::string&) { seed_given = true; });
    sub->add_option("--samples", samples_path, "input samples CSV");
    sub->add_option("--probes", probes_path, "probe pairs CSV");
    return sub;
  };
  auto* c_simulate = add_common(app.add_subcommand(
      "simulate", "draw (U,V) samples and write a CSV"));
  auto* c_cdf = add_common(app.add_subcommand(
      "cdf", "evaluate the joint CDF at probe pairs"));
  auto* c_recover = add_common(app.add_subcommand(
      "recover", "recover component CDFs from a joint CDF"));
  auto* c_diagnose = add_common(app.add_subcommand(
      "diagnose", "ratio diagnostics between two systems"));
  auto* c_counter = add_common(app.add_subcommand(
      "counterexample", "mixed-sign alternative-system search"));
  auto* c_validate = add_common(app.add_subcommand(
      "validate-generator", "lattice checks of a generator"));

  CLI11_PARSE(app, argc, argv);

  try {
    Ctx ctx;
    std::string bytes = read_file(config_path);
    ctx.config_hash = io::hex64(io::fnv1a64(bytes));
    ctx.config = json::parse(bytes);
    ctx.out_path = out_path;
    ctx.samples_path = samples_path;
    ctx.probes_path = probes_path;
    if (seed_given) ctx.seed_override = static_cast<std::uint64_t>(seed);

    if (c_simulate->parsed()) return cmd_simulate(ctx);
    if (c_cdf->parsed()) return cmd_cdf(ctx);
    if (c_recover->parsed()) return cmd_recover(ctx);
    if (c_diagnose->parsed()) return cmd_diagnose(ctx);
    if (c_counter->parsed()) return cmd_counterexample(ctx);
    if (c_validate->parsed()) return cmd_validate_generator(ctx);
    return 1;
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
