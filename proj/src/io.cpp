#include "hofa/io.hpp"

#include <fstream>
#include <sstream>

namespace hofa::io {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& message) { throw ValidationError(code, message); }

const Json& field(const Json& j, const char* key, const std::string& code) {
  if (!j.is_object()) fail(code, "expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) fail(code, std::string("missing field \"") + key + "\"");
  return *it;
}

int int_field(const Json& j, const char* key, const std::string& code) {
  const auto& v = field(j, key, code);
  if (!v.is_number_integer()) fail(code, std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

std::vector<int> int_array(const Json& v, const std::string& code, const char* what) {
  if (!v.is_array()) fail(code, std::string(what) + " must be an array of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) fail(code, std::string(what) + " must be an array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

void reject_unknown(const Json& j, std::initializer_list<const char*> allowed, const std::string& code) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(code, "unknown field \"" + key + "\"");
  }
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail("parse.json", e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("io.file", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

NCPolynomial polynomial_from_json(const Json& j) {
  const std::string code = "parse.polynomial";
  if (!j.is_object()) fail(code, "polynomial must be a JSON object");
  reject_unknown(j, {"p", "n", "monomials"}, code);
  const int p = int_field(j, "p", code);
  const int n = int_field(j, "n", code);
  if (n < 0 || n > 40) fail(code, "n out of range");
  const auto& monos = field(j, "monomials", code);
  if (!monos.is_array()) fail("parse.monomial", "monomials must be an array");
  std::vector<Monomial> terms;
  for (const auto& mj : monos) {
    if (!mj.is_object()) fail("parse.monomial", "monomial must be an object");
    reject_unknown(mj, {"exps", "k", "c"}, "parse.monomial");
    Monomial m;
    const auto exps = int_array(field(mj, "exps", "parse.monomial"), "parse.monomial", "exps");
    for (int e : exps) {
      if (e < 0 || e > 255) fail("parse.monomial", "exponent out of range");
      m.exps.push_back(static_cast<std::uint8_t>(e));
    }
    m.depth = int_field(mj, "k", "parse.monomial");
    m.coeff = int_field(mj, "c", "parse.monomial");
    terms.push_back(std::move(m));
  }
  try {
    return {p, n, std::move(terms)};
  } catch (const ValidationError& e) {
    if (e.code() == "poly.monomial") fail("parse.monomial", e.what());
    throw;
  }
}

Json to_json(const NCPolynomial& poly) {
  Json monos = Json::array();
  for (const auto& m : poly.monomials()) {
    Json exps = Json::array();
    for (auto e : m.exps) exps.push_back(static_cast<int>(e));
    monos.push_back(Json{{"exps", exps}, {"k", m.depth}, {"c", m.coeff}});
  }
  return Json{{"p", poly.p()}, {"n", poly.n()}, {"monomials", monos}};
}

namespace {

template <class T, class Convert>
FieldFunction<T> table_from_json(const Json& j, Convert&& convert) {
  const std::string code = "parse.table";
  if (!j.is_object()) fail(code, "truth table must be a JSON object");
  reject_unknown(j, {"p", "n", "values", "hex"}, code);
  const int p = int_field(j, "p", code);
  const int n = int_field(j, "n", code);
  if (n < 0 || n > 40) fail(code, "n out of range");
  const std::uint64_t size = checked_pow(validate_prime(p), n);
  std::vector<T> values;
  if (j.contains("hex")) {
    if (j.contains("values")) fail(code, "give either values or hex, not both");
    if (p != 2) fail(code, "hex tables are defined for p = 2 only");
    const auto& hv = j["hex"];
    if (!hv.is_string()) fail(code, "hex must be a string");
    const auto hex = hv.get<std::string>();
    if (hex.size() != (size + 3) / 4) fail(code, "hex string has the wrong length");
    values.resize(size);
    for (std::size_t i = 0; i < hex.size(); ++i) {
      const char c = hex[i];
      int nib = 0;
      if (c >= '0' && c <= '9') {
        nib = c - '0';
      } else if (c >= 'a' && c <= 'f') {
        nib = c - 'a' + 10;
      } else if (c >= 'A' && c <= 'F') {
        nib = c - 'A' + 10;
      } else {
        fail(code, "invalid hex digit");
      }
      for (int b = 0; b < 4; ++b) {
        const std::uint64_t x = 4 * i + static_cast<std::uint64_t>(b);
        if (x < size) {
          values[x] = static_cast<T>((nib >> b) & 1);
        } else if ((nib >> b) & 1) {
          fail(code, "hex padding bits must be zero");
        }
      }
    }
  } else {
    const auto& vs = field(j, "values", code);
    if (!vs.is_array()) fail(code, "values must be an array");
    if (vs.size() != size) fail("table.size", "table has " + std::to_string(vs.size()) + " entries, expected " + std::to_string(size));
    for (const auto& v : vs) values.push_back(convert(v));
  }
  return {p, n, std::move(values)};
}

}  // namespace

BoolFunction bool_table_from_json(const Json& j) {
  return table_from_json<std::uint8_t>(j, [](const Json& v) -> std::uint8_t {
    if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1)) fail("parse.table", "entries must be 0 or 1");
    return static_cast<std::uint8_t>(v.get<int>());
  });
}

RealFunction real_table_from_json(const Json& j) {
  auto f = table_from_json<double>(j, [](const Json& v) -> double {
    if (!v.is_number()) fail("parse.table", "entries must be numbers");
    return v.get<double>();
  });
  for (double v : f.values) {
    if (!(v >= 0 && v <= 1)) fail("parse.table", "entries must lie in [0, 1]");
  }
  return f;
}

Json to_json(const BoolFunction& f, bool hex) {
  Json j{{"p", f.p}, {"n", f.n}};
  if (hex && f.p == 2) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s((f.size() + 3) / 4, '0');
    for (std::size_t i = 0; i < s.size(); ++i) {
      int nib = 0;
      for (int b = 0; b < 4; ++b) {
        const std::uint64_t x = 4 * i + static_cast<std::uint64_t>(b);
        if (x < f.size() && f[x]) nib |= 1 << b;
      }
      s[i] = digits[nib];
    }
    j["hex"] = s;
  } else {
    Json vs = Json::array();
    for (auto v : f.values) vs.push_back(static_cast<int>(v));
    j["values"] = vs;
  }
  return j;
}

Json to_json(const RealFunction& f) { return Json{{"p", f.p}, {"n", f.n}, {"values", f.values}}; }

LinearFormSystem system_from_json(const Json& j) {
  const std::string code = "parse.system";
  if (!j.is_object()) fail(code, "system must be a JSON object");
  reject_unknown(j, {"p", "ell", "forms", "complexity"}, code);
  const int p = int_field(j, "p", code);
  const int ell = int_field(j, "ell", code);
  const auto& fj = field(j, "forms", code);
  if (!fj.is_array()) fail(code, "forms must be an array");
  std::vector<std::vector<int>> forms;
  for (const auto& f : fj) forms.push_back(int_array(f, code, "form"));
  std::optional<int> complexity;
  if (j.contains("complexity") && !j["complexity"].is_null()) complexity = int_field(j, "complexity", code);
  return {p, ell, std::move(forms), complexity};
}

Json to_json(const LinearFormSystem& system) {
  Json j{{"p", system.p()}, {"ell", system.ell()}, {"forms", system.forms()}};
  j["complexity"] = system.declared_complexity() ? Json(*system.declared_complexity()) : Json(nullptr);
  return j;
}

PolynomialFactor factor_from_json(const Json& j) {
  const std::string code = "parse.factor";
  if (!j.is_array() || j.empty()) fail(code, "factor must be a non-empty array");
  std::vector<NCPolynomial> polys;
  std::vector<int> degrees, depths;
  for (const auto& e : j) {
    if (!e.is_object()) fail(code, "factor entries must be objects");
    reject_unknown(e, {"polynomial", "d", "k"}, code);
    polys.push_back(polynomial_from_json(field(e, "polynomial", code)));
    degrees.push_back(int_field(e, "d", code));
    depths.push_back(int_field(e, "k", code));
  }
  const int p = polys[0].p(), n = polys[0].n();
  return {p, n, std::move(polys), std::move(degrees), std::move(depths)};
}

Json to_json(const PolynomialFactor& factor) {
  Json j = Json::array();
  for (std::size_t i = 0; i < factor.size(); ++i) {
    j.push_back(Json{{"polynomial", to_json(factor.polynomials()[i])}, {"d", factor.degrees()[i]}, {"k", factor.depths()[i]}});
  }
  return j;
}

LimitObject limit_from_json(const Json& j) {
  const std::string code = "parse.limit";
  if (!j.is_object()) fail(code, "limit object must be a JSON object");
  reject_unknown(j, {"p", "d", "coords", "table"}, code);
  const int p = int_field(j, "p", code);
  std::optional<int> d;
  const auto& dj = field(j, "d", code);
  if (dj.is_string()) {
    if (dj.get<std::string>() != "inf") fail(code, "d must be an integer or \"inf\"");
  } else if (dj.is_number_integer()) {
    d = dj.get<int>();
  } else {
    fail(code, "d must be an integer or \"inf\"");
  }
  std::vector<GdCoordinate> coords;
  const auto& cj = field(j, "coords", code);
  if (!cj.is_array()) fail(code, "coords must be an array");
  for (const auto& c : cj) {
    reject_unknown(c, {"j", "k", "i"}, code);
    coords.push_back({int_field(c, "j", code), int_field(c, "k", code), int_field(c, "i", code)});
  }
  // Build with a placeholder table to validate coordinates and learn the size.
  std::uint64_t size = 1;
  for (const auto& c : coords) {
    if (c.k < 0 || c.k > 20) fail("limit.coords", "depth out of range");
    size *= checked_pow(validate_prime(p), c.k + 1);
    if (size > static_cast<std::uint64_t>(kConsistentTupleCeiling)) fail("limit.table", "truncation too large");
  }
  LimitObject shape(p, d, coords, std::vector<double>(size, 0.0));
  std::vector<double> table(size, 0.0);
  std::vector<bool> seen(size, false);
  const auto& tj = field(j, "table", code);
  if (!tj.is_array()) fail(code, "table must be an array");
  for (const auto& e : tj) {
    reject_unknown(e, {"b", "value"}, code);
    const auto b = int_array(field(e, "b", code), code, "b");
    std::vector<std::uint32_t> bu;
    for (int v : b) {
      if (v < 0) fail("limit.value", "negative numerator");
      bu.push_back(static_cast<std::uint32_t>(v));
    }
    const auto idx = shape.index_of(bu);
    if (seen[idx]) fail(code, "duplicate table entry");
    seen[idx] = true;
    const auto& v = field(e, "value", code);
    if (!v.is_number()) fail(code, "value must be a number");
    table[idx] = v.get<double>();
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) fail("limit.table", "table must cover every value tuple");
  return {p, d, std::move(coords), std::move(table)};
}

Json to_json(const LimitObject& gamma) {
  Json j{{"p", gamma.p()}};
  j["d"] = gamma.d() ? Json(*gamma.d()) : Json("inf");
  Json coords = Json::array();
  for (const auto& c : gamma.coords()) coords.push_back(Json{{"j", c.j}, {"k", c.k}, {"i", c.i}});
  j["coords"] = coords;
  Json table = Json::array();
  for (std::uint64_t idx = 0; idx < gamma.table().size(); ++idx) {
    table.push_back(Json{{"b", gamma.values_of(idx)}, {"value", gamma.table()[idx]}});
  }
  j["table"] = table;
  return j;
}

std::string pattern_string(std::uint64_t g, std::size_t m) {
  std::string s(m, '0');
  for (std::size_t i = 0; i < m; ++i) s[i] = ((g >> i) & 1) ? '1' : '0';
  return s;
}

Json to_json(const RestrictionDistribution& dist) {
  Json patterns = Json::array();
  for (std::size_t g = 0; g < dist.patterns(); ++g) {
    Json e{{"g", pattern_string(g, dist.system.size())}, {"probability", dist.probabilities[g]}};
    if (dist.exact) {
      const auto& r = (*dist.exact)[g];
      e["exact"] = std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
    }
    patterns.push_back(e);
  }
  return Json{{"system", to_json(dist.system)}, {"consistent", dist.consistent}, {"patterns", patterns}};
}

Json to_json(const ConsistentTupleSet& set) {
  Json spec = Json::array();
  std::vector<int> exponents;
  for (const auto& c : set.spec.coords) {
    spec.push_back(Json{{"d", c.d}, {"k", c.k}});
    for (std::size_t i = 0; i < set.system.size(); ++i) exponents.push_back(c.k + 1);
  }
  Json tuples = Json::array();
  for (const auto& t : set.tuples()) tuples.push_back(Json{{"numerators", t}, {"exponents", exponents}});
  return Json{{"system", to_json(set.system)}, {"spec", spec}, {"K", set.K}, {"tuples", tuples}};
}

}  // namespace hofa::io
