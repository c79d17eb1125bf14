#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "json.hpp"
#include "maxident/coefficients.hpp"
#include "maxident/distribution.hpp"
#include "maxident/generator.hpp"
#include "maxident/identification.hpp"
#include "maxident/joint_cdf.hpp"
#include "maxident/nonuniqueness.hpp"
#include "maxident/system.hpp"

namespace maxident::io {

// JSON forms. Infinite endpoints are encoded as the strings "inf"/"-inf"
// (JSON has no infinity literal). The *_from_json functions throw
// std::invalid_argument on malformed or unknown content.

nlohmann::json to_json(const Distribution& d);
Distribution distribution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ScaleCoefficients& coeffs);
ScaleCoefficients coefficients_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GeneratorSpec& gen);
GeneratorSpec generator_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ComponentSystem& system);
ComponentSystem system_from_json(const nlohmann::json& j);

// Tabulated joint CDFs only (the other kinds are procedural or better
// served by the pairs CSV); values serialize as nested rows over t1.
nlohmann::json to_json(const JointCdf2D& g);
JointCdf2D tabulated_from_json(const nlohmann::json& j);

// Report forms (write-only). NaN entries become JSON null.
nlohmann::json to_json(const SolverReport& rep);
nlohmann::json to_json(const RecoveryResult& result);
nlohmann::json to_json(const GeneratorValidation& val);
nlohmann::json to_json(const AntiperiodicResult& result);
nlohmann::json to_json(const RelationReport& rep);
nlohmann::json to_json(const EquivalenceVerdict& verdict);
nlohmann::json to_json(const AlternativeCandidate& cand);

// CSV with columns
//   node,eta1,eta2,eta3,zeta,residual_antiperiodic,residual_product_rowmax
// where residual_product_rowmax is the max over t2 of the product-identity
// residual at t1 = node. Skipped entries print as nan.
std::string diagnostics_csv(const RatioDiagnostics& diag);

// CSV with header "u,v"; one sample pair per row.
std::string pairs_csv(std::span<const std::pair<double, double>> pairs);

// Shortest round-trip decimal form ("%.17g" is the upper bound used).
std::string format_double(double x);

// FNV-1a 64-bit, used to fingerprint the configuration document in reports.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t x);

}  // namespace maxident::io
