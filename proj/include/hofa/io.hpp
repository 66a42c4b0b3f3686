#pragma once

#include <json.hpp>
#include <string>

#include "hofa/consistency.hpp"
#include "hofa/factors.hpp"
#include "hofa/limits.hpp"
#include "hofa/linear_systems.hpp"
#include "hofa/torus.hpp"

namespace hofa::io {

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file; failures raise "io.file" or "parse.json".
Json read_json_file(const std::string& path);
Json parse_json(const std::string& text);

/// {"p", "n", "monomials": [{"exps", "k", "c"}]}.
NCPolynomial polynomial_from_json(const Json& j);
Json to_json(const NCPolynomial& poly);

/// {"p", "n", "values": [...]} or, for p = 2, {"p", "n", "hex": "..."} where
/// hex digit i carries entries 4i..4i+3, least significant bit first.
BoolFunction bool_table_from_json(const Json& j);
RealFunction real_table_from_json(const Json& j);
Json to_json(const BoolFunction& f, bool hex = false);
Json to_json(const RealFunction& f);

/// {"p", "ell", "forms": [[...]], "complexity": int | null}.
LinearFormSystem system_from_json(const Json& j);
Json to_json(const LinearFormSystem& system);

/// [{"polynomial": {...}, "d": int, "k": int}, ...]
PolynomialFactor factor_from_json(const Json& j);
Json to_json(const PolynomialFactor& factor);

/// {"p", "d": int | "inf", "coords": [{"j", "k", "i"}], "table": [{"b": [...], "value"}]}.
LimitObject limit_from_json(const Json& j);
Json to_json(const LimitObject& gamma);

/// Pattern strings list g(L_1) first.
std::string pattern_string(std::uint64_t g, std::size_t m);
Json to_json(const RestrictionDistribution& dist);

Json to_json(const ConsistentTupleSet& set);

}  // namespace hofa::io
