#include "maxident/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace maxident::io {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

json encode_real(double x) {
  if (x == kInf) return "inf";
  if (x == -kInf) return "-inf";
  return x;
}

double decode_real(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw std::invalid_argument(std::string(what) +
                              ": expected a number or \"inf\"/\"-inf\"");
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number())
    throw std::invalid_argument(std::string("field \"") + key +
                                "\" must be a number");
  return v.get<double>();
}

std::vector<double> number_array(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array())
    throw std::invalid_argument(std::string("field \"") + key +
                                "\" must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& x : v) {
    if (!x.is_number())
      throw std::invalid_argument(std::string("field \"") + key +
                                  "\" must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::string text(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string())
    throw std::invalid_argument(std::string("field \"") + key +
                                "\" must be a string");
  return v.get<std::string>();
}

}  // namespace

json to_json(const Distribution& d) {
  json j;
  switch (d.family()) {
    case Distribution::Family::exponential:
      j = {{"family", "exponential"}, {"rate", d.params().first}};
      break;
    case Distribution::Family::uniform:
      j = {{"family", "uniform"},
           {"lo", d.params().first},
           {"hi", d.params().second}};
      break;
    case Distribution::Family::weibull:
      j = {{"family", "weibull"},
           {"shape", d.params().first},
           {"scale", d.params().second}};
      break;
    case Distribution::Family::frechet:
      j = {{"family", "frechet"},
           {"shape", d.params().first},
           {"scale", d.params().second}};
      break;
    case Distribution::Family::tabulated:
      j = {{"family", "tabulated"},
           {"nodes", d.nodes()},
           {"values", d.values()}};
      if (d.support().lower != d.nodes().front() ||
          d.support().upper != d.nodes().back())
        j["support"] = {{"lower", encode_real(d.support().lower)},
                        {"upper", encode_real(d.support().upper)},
                        {"lower_closed", d.support().lower_closed},
                        {"upper_closed", d.support().upper_closed}};
      break;
    case Distribution::Family::empirical:
      j = {{"family", "empirical"}, {"samples", d.nodes()}};
      break;
  }
  return j;
}

Distribution distribution_from_json(const json& j) {
  std::string family = text(j, "family");
  if (family == "exponential")
    return Distribution::exponential(number(j, "rate"));
  if (family == "uniform")
    return Distribution::uniform(number(j, "lo"), number(j, "hi"));
  if (family == "weibull")
    return Distribution::weibull(number(j, "shape"), number(j, "scale"));
  if (family == "frechet")
    return Distribution::frechet(number(j, "shape"), number(j, "scale"));
  if (family == "tabulated") {
    auto nodes = number_array(j, "nodes");
    auto values = number_array(j, "values");
    if (auto it = j.find("support"); it != j.end()) {
      double lo = decode_real(field(*it, "lower"), "support.lower");
      double hi = decode_real(field(*it, "upper"), "support.upper");
      bool lo_closed = it->value("lower_closed", std::isfinite(lo));
      bool hi_closed = it->value("upper_closed", std::isfinite(hi));
      return Distribution::tabulated(std::move(nodes), std::move(values),
                                     Support(lo, hi, lo_closed, hi_closed));
    }
    return Distribution::tabulated(std::move(nodes), std::move(values));
  }
  if (family == "empirical")
    return Distribution::empirical(number_array(j, "samples"));
  throw std::invalid_argument("unknown distribution family \"" + family +
                              "\"");
}

json to_json(const ScaleCoefficients& coeffs) {
  return {{"a", coeffs.a},
          {"b", coeffs.b},
          {"c", coeffs.c},
          {"d", coeffs.d},
          {"regime", coeffs.regime == Regime::all_positive ? "all_positive"
                                                           : "mixed_sign"}};
}

ScaleCoefficients coefficients_from_json(const json& j) {
  ScaleCoefficients coeffs = ScaleCoefficients::infer(
      number(j, "a"), number(j, "b"), number(j, "c"), number(j, "d"));
  if (j.contains("regime")) {
    std::string want = text(j, "regime");
    std::string got =
        coeffs.regime == Regime::all_positive ? "all_positive" : "mixed_sign";
    if (want != got)
      throw std::invalid_argument("coefficients declare regime \"" + want +
                                  "\" but their signs imply \"" + got + "\"");
  }
  return coeffs;
}

json to_json(const GeneratorSpec& gen) {
  switch (gen.family()) {
    case GeneratorSpec::Family::constant_one:
      return {{"family", "constant_one"}};
    case GeneratorSpec::Family::fgm:
      return {{"family", "fgm"}, {"alpha", gen.alpha()}};
    case GeneratorSpec::Family::tabulated4d:
      return {{"family", "tabulated4d"},
              {"axes", gen.axes()},
              {"values", gen.values()}};
  }
  throw std::invalid_argument("unknown generator family");
}

GeneratorSpec generator_from_json(const json& j) {
  std::string family = text(j, "family");
  if (family == "constant_one") return GeneratorSpec::constant_one();
  if (family == "fgm") return GeneratorSpec::fgm(number(j, "alpha"));
  if (family == "tabulated4d") {
    const json& axes = field(j, "axes");
    if (!axes.is_array() || axes.size() != 4)
      throw std::invalid_argument("tabulated4d: \"axes\" must hold 4 arrays");
    std::array<std::vector<double>, 4> ax;
    for (std::size_t i = 0; i < 4; ++i) ax[i] = axes[i].get<std::vector<double>>();
    return GeneratorSpec::tabulated4d(std::move(ax),
                                      number_array(j, "values"));
  }
  throw std::invalid_argument("unknown generator family \"" + family + "\"");
}

json to_json(const ComponentSystem& system) {
  json j = {{"fx", to_json(system.fx())},
            {"fy", to_json(system.fy())},
            {"fz1", to_json(system.fz1())}};
  if (system.dependence() == Dependence::independent) {
    j["dependence"] = "independent";
  } else {
    j["dependence"] = "max_independent";
    j["generator"] = to_json(system.generator());
  }
  return j;
}

ComponentSystem system_from_json(const json& j) {
  Distribution fx = distribution_from_json(field(j, "fx"));
  Distribution fy = distribution_from_json(field(j, "fy"));
  Distribution fz1 = distribution_from_json(field(j, "fz1"));
  std::string dep = j.contains("dependence") ? text(j, "dependence")
                                             : std::string("independent");
  if (dep == "independent")
    return ComponentSystem::independent(std::move(fx), std::move(fy),
                                        std::move(fz1));
  if (dep == "max_independent")
    return ComponentSystem::max_independent(
        std::move(fx), std::move(fy), std::move(fz1),
        generator_from_json(field(j, "generator")));
  throw std::invalid_argument("unknown dependence \"" + dep + "\"");
}

json to_json(const JointCdf2D& g) {
  if (g.kind() != JointCdf2D::Kind::tabulated)
    throw std::invalid_argument("only tabulated joint CDFs serialize to JSON");
  json rows = json::array();
  const std::size_t n2 = g.grid2().size();
  for (std::size_t i = 0; i < g.grid1().size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < n2; ++k) row.push_back(g.values()[i * n2 + k]);
    rows.push_back(std::move(row));
  }
  return {{"kind", "tabulated"},
          {"t1", g.grid1()},
          {"t2", g.grid2()},
          {"values", rows}};
}

JointCdf2D tabulated_from_json(const json& j) {
  auto t1 = number_array(j, "t1");
  auto t2 = number_array(j, "t2");
  const json& rows = field(j, "values");
  if (!rows.is_array() || rows.size() != t1.size())
    throw std::invalid_argument("\"values\" must hold one row per t1 node");
  std::vector<double> values;
  values.reserve(t1.size() * t2.size());
  for (const json& row : rows) {
    if (!row.is_array() || row.size() != t2.size())
      throw std::invalid_argument("\"values\" rows must match t2 length");
    for (const json& x : row) values.push_back(x.get<double>());
  }
  return JointCdf2D::tabulated(std::move(t1), std::move(t2),
                               std::move(values));
}

json to_json(const SolverReport& rep) {
  json starts = json::array();
  for (const StartReport& s : rep.starts)
    starts.push_back({{"objective", s.objective},
                      {"iterations", s.iterations},
                      {"converged", s.converged}});
  return {{"method", rep.method},
          {"starts", starts},
          {"objective_trace", rep.objective_trace},
          {"best_start", rep.best_start},
          {"multistart_agreement", rep.multistart_agreement},
          {"agreed", rep.agreed},
          {"probe_count", rep.probe_count},
          {"skipped_probes", rep.skipped_probes},
          {"unknown_count", rep.unknown_count}};
}

json to_json(const RecoveryResult& result) {
  return {{"fx_hat", to_json(result.fx_hat)},
          {"fy_hat", to_json(result.fy_hat)},
          {"fz1_hat", to_json(result.fz1_hat)},
          {"sup_residual", result.sup_residual},
          {"report", to_json(result.report)},
          {"skipped_nodes", result.skipped_nodes}};
}

json to_json(const GeneratorValidation& val) {
  return {{"passed", val.passed},
          {"range_ok", val.range_ok},
          {"beta_min", val.beta_min},
          {"beta_max", val.beta_max},
          {"beta_min_point", val.beta_min_point},
          {"beta_max_point", val.beta_max_point},
          {"boundary_ok", val.boundary_ok},
          {"boundary_worst", val.boundary_worst},
          {"rectangles_ok", val.rectangles_ok},
          {"min_rectangle_mass", val.min_rectangle_mass},
          {"worst_rectangle_corner", val.worst_rectangle_corner},
          {"points_per_axis", val.points_per_axis}};
}

json to_json(const AntiperiodicResult& result) {
  const char* verdict = nullptr;
  switch (result.verdict) {
    case AntiperiodicVerdict::vanishes: verdict = "vanishes"; break;
    case AntiperiodicVerdict::inconclusive: verdict = "inconclusive"; break;
    case AntiperiodicVerdict::violated: verdict = "violated"; break;
  }
  return {{"verdict", verdict},
          {"witness", result.witness},
          {"worst_pair_residual", result.worst_pair_residual},
          {"max_abs_zeta", result.max_abs_zeta},
          {"max_terminal_magnitude", result.max_terminal_magnitude}};
}

json to_json(const RelationReport& rep) {
  return {{"nodes", rep.nodes},
          {"residual_fx", rep.residual_fx},
          {"residual_fy", rep.residual_fy},
          {"max_residual_fx", rep.max_residual_fx},
          {"max_residual_fy", rep.max_residual_fy},
          {"skipped", rep.skipped}};
}

json to_json(const EquivalenceVerdict& verdict) {
  return {{"equivalent", verdict.equivalent},
          {"max_deviation", verdict.max_deviation},
          {"witness_t1", verdict.witness_t1},
          {"witness_t2", verdict.witness_t2},
          {"lattice_limited", verdict.lattice_limited}};
}

json to_json(const AlternativeCandidate& cand) {
  json j = {{"nodes", cand.nodes},
            {"fm_values", cand.fm_values},
            {"fn_values", cand.fn_values},
            {"fs1", to_json(cand.fs1)},
            {"max_relation_residual", cand.max_relation_residual},
            {"validity",
             {{"valid", cand.validity.valid},
              {"witness_node", cand.validity.witness_node},
              {"reason", cand.validity.reason}}}};
  if (cand.equivalence) j["equivalence"] = to_json(*cand.equivalence);
  return j;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string diagnostics_csv(const RatioDiagnostics& diag) {
  std::string out =
      "node,eta1,eta2,eta3,zeta,residual_antiperiodic,residual_product_rowmax\n";
  const std::size_t n = diag.grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    double rowmax = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < n; ++k) {
      double r = diag.residual_product[i * n + k];
      if (!std::isnan(r) && !(r <= rowmax)) rowmax = r;
    }
    out += format_double(diag.grid[i]);
    for (double v : {diag.eta1.values[i], diag.eta2.values[i],
                     diag.eta3.values[i], diag.zeta.values[i],
                     diag.residual_antiperiodic[i], rowmax}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string pairs_csv(std::span<const std::pair<double, double>> pairs) {
  std::string out = "u,v\n";
  for (const auto& [u, v] : pairs) {
    out += format_double(u);
    out += ',';
    out += format_double(v);
    out += '\n';
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(x));
  return buf;
}

}  // namespace maxident::io
