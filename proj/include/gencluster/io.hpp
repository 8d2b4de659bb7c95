#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <type_traits>
#include <vector>

#include <nlohmann/json.hpp>

#include "gencluster/errors.hpp"
#include "gencluster/expr.hpp"
#include "gencluster/identities.hpp"
#include "gencluster/pattern.hpp"
#include "gencluster/seed.hpp"

namespace gencluster {

using nlohmann::json;

/// Integers that fit in 64 bits as numbers, larger ones as decimal strings.
inline json integer_to_json(const Integer& v) {
  static const Integer lo = INT64_MIN;
  static const Integer hi = INT64_MAX;
  if (v >= lo && v <= hi) return static_cast<std::int64_t>(v);
  return v.str();
}

inline Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Integer(j.get<std::string>());
    } catch (const std::exception&) {
      throw InputError("bad integer: " + j.get<std::string>());
    }
  }
  throw InputError("expected an integer, got " + j.dump());
}

inline json matrix_to_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline IntMatrix matrix_from_json(const json& j) { return detail::matrix_from_json(j); }

/// {generator-name: exponent} for the nonzero exponents.
inline json exponents_to_json(const VariableTable& table, const ExponentVector& e) {
  json out = json::object();
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] != 0) out[table.name(i)] = e[i];
  return out;
}

inline ExponentVector exponents_from_json(const VariableTable& table, const json& j) {
  if (!j.is_object()) throw InputError("exponent map must be an object");
  ExponentVector e(table.size());
  for (const auto& [name, exp] : j.items()) {
    if (!exp.is_number_integer()) throw InputError("exponent of " + name + " must be an integer");
    if (const auto idx = table.find(name)) e[*idx] += exp.get<std::int32_t>();
  }
  return e;
}

/// [[coefficient, {name: exponent}], ...] in canonical term order.
inline json poly_to_json(const LaurentPoly& p) {
  json out = json::array();
  for (const auto& t : p.terms()) out.push_back(json::array({integer_to_json(t.coefficient), exponents_to_json(*p.table(), t.exponents)}));
  return out;
}

inline LaurentPoly poly_from_json(const TablePtr& table, const json& j) {
  if (!j.is_array()) throw InputError("polynomial must be an array of [coefficient, exponents] pairs");
  std::vector<Term> terms;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2) throw InputError("polynomial term must be [coefficient, exponents]");
    terms.push_back({exponents_from_json(*table, t[1]), integer_from_json(t[0])});
  }
  return LaurentPoly::from_terms(table, std::move(terms));
}

inline json to_json(const SfRational& v) { return {{"num", poly_to_json(v.numerator())}, {"den", poly_to_json(v.denominator())}}; }
inline json to_json(const TropElement& v) { return exponents_to_json(*v.table(), v.exponents()); }

/// Reads an ambient-field value: an expression string or {num, den}.
inline SfRational sf_from_json(const TablePtr& table, const json& j, const ExpressionParser& parser) {
  if (j.is_string()) return parser.parse(j.get<std::string>());
  if (j.is_object() && j.contains("num")) {
    const auto num = poly_from_json(table, j.at("num"));
    const auto den = j.contains("den") ? poly_from_json(table, j.at("den")) : LaurentPoly::one(table);
    return SfRational::from_fraction(num, den);
  }
  throw InputError("expected an expression string or {num, den}, got " + j.dump());
}

/// Reads a semifield element of S (strings are parsed with the matching ⊕).
template <SemifieldInstance S>
typename S::Element element_from_json(const TablePtr& table, const json& j) {
  if constexpr (std::is_same_v<S, Tropical>) {
    if (j.is_object() && !j.contains("num")) return TropElement(table, exponents_from_json(*table, j));
    const ExpressionParser parser(table, OplusMode::tropical);
    return sf_from_json(table, j, parser).to_trop();
  } else {
    const ExpressionParser parser(table, OplusMode::universal);
    const auto v = sf_from_json(table, j, parser);
    if (!v.is_subtraction_free()) throw InputError("universal semifield elements must be subtraction-free");
    return v;
  }
}

/// Parsed seed document:
/// {n, B, d, coefficients: "principal" | "universal" | {semifield, y, z}, x}.
struct SeedSpec {
  ExchangeMatrix B;
  std::vector<int> d;
  std::string semifield = "principal";
  json y;  // null: formal y_i
  json z;  // null: symbolic z_{i,s}
  json x;  // null: formal x_i
};

inline std::vector<int> degrees_from_json(const json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) throw InputError("d must be an array of length n");
  std::vector<int> d;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1 || v.get<std::int64_t>() > 64)
      throw InputError("mutation degrees must be integers in 1..64");
    d.push_back(v.get<int>());
  }
  return d;
}

inline SeedSpec seed_spec_from_json(const json& j) {
  if (!j.is_object()) throw InputError("seed document must be a JSON object");
  if (!j.contains("B")) throw InputError("seed document needs B");
  SeedSpec s;
  const IntMatrix b = matrix_from_json(j.at("B"));
  if (j.contains("n") && (!j.at("n").is_number_integer() || j.at("n").get<std::int64_t>() != static_cast<std::int64_t>(b.rows())))
    throw InputError("n does not match the size of B");
  s.B = ExchangeMatrix(b);
  s.d = j.contains("d") ? degrees_from_json(j.at("d"), b.rows()) : std::vector<int>(b.rows(), 1);
  if (j.contains("coefficients")) {
    const auto& c = j.at("coefficients");
    if (c.is_string()) {
      s.semifield = c.get<std::string>();
    } else if (c.is_object()) {
      s.semifield = c.value("semifield", "universal");
      if (c.contains("y")) s.y = c.at("y");
      if (c.contains("z")) s.z = c.at("z");
    } else {
      throw InputError("coefficients must be \"principal\", \"universal\" or an object");
    }
  }
  if (s.semifield != "principal" && s.semifield != "universal")
    throw InputError("unknown semifield: " + s.semifield);
  if (j.contains("x")) s.x = j.at("x");
  return s;
}

inline SeedSpec seed_spec_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("input is not valid JSON: ") + e.what());
  }
  return seed_spec_from_json(j);
}

/// Initial seed described by spec over a fresh table for (B, d).
template <SemifieldInstance S>
Seed<S> build_seed(const SeedSpec& spec) {
  const TablePtr table = make_table(spec.B, spec.d);
  Seed<S> formal = Seed<S>::initial(table, spec.B);
  const auto n = static_cast<std::size_t>(spec.B.rank());

  std::vector<SfRational> x = formal.x();
  if (!spec.x.is_null()) {
    if (!spec.x.is_array() || spec.x.size() != n) throw InputError("x must be an array of length n");
    const ExpressionParser parser(table, OplusMode::universal);
    for (std::size_t i = 0; i < n; ++i) x[i] = sf_from_json(table, spec.x[i], parser);
  }
  std::vector<typename S::Element> y = formal.y();
  if (!spec.y.is_null()) {
    if (!spec.y.is_array() || spec.y.size() != n) throw InputError("y must be an array of length n");
    for (std::size_t i = 0; i < n; ++i) y[i] = element_from_json<S>(table, spec.y[i]);
  }
  auto data = formal.data();
  if (!spec.z.is_null()) {
    if (!spec.z.is_object()) throw InputError("z must be an object {\"z_i_s\": value}");
    for (const auto& [name, value] : spec.z.items()) {
      const auto idx = table->find(name);
      if (!idx) throw InputError(name + " is the constant 1 and cannot be rebound");
      const auto& g = table->generator(*idx);
      const auto v = element_from_json<S>(table, value);
      data.z[g.direction][g.step] = v;
      data.z[g.direction][table->degree(g.direction) - g.step] = v;
    }
  }
  try {
    data.validate(table);
  } catch (const ReciprocityFailure& e) {
    throw InputError(e.what());
  }
  return Seed<S>(table, std::move(x), std::move(y), spec.B, std::make_shared<const MutationData<S>>(std::move(data)));
}

/// Seed document in the input schema (expression strings) plus structured forms.
template <SemifieldInstance S>
json seed_to_json(const Seed<S>& seed, const MutationWord& word = {}) {
  const auto& table = *seed.table();
  const int n = seed.rank();
  json j;
  j["n"] = n;
  j["B"] = matrix_to_json(seed.B().matrix());
  j["d"] = seed.degrees();
  json xs = json::array(), ys = json::array(), xf = json::array(), yf = json::array();
  for (int i = 0; i < n; ++i) {
    xs.push_back(seed.x()[i].to_string());
    ys.push_back(seed.y()[i].to_string());
    xf.push_back(to_json(seed.x()[i]));
    yf.push_back(to_json(seed.y()[i]));
  }
  json z = json::object();
  for (int i = 0; i < n; ++i)
    for (int s = 1; 2 * s <= table.degree(i); ++s) z["z_" + std::to_string(i + 1) + "_" + std::to_string(s)] = seed.data().z[i][s].to_string();
  j["coefficients"] = {{"semifield", std::string(S::name)}, {"y", ys}, {"z", z}};
  j["x"] = xs;
  json w = json::array();
  for (int k : word) w.push_back(k + 1);
  j["word"] = w;
  j["canonical"] = {{"x", xf}, {"y", yf}};
  return j;
}

template <SemifieldInstance S>
std::string seed_to_text(const Seed<S>& seed) {
  std::string out = "B = " + seed.B().matrix().to_string() + "\n";
  for (int i = 0; i < seed.rank(); ++i) out += "x" + std::to_string(i + 1) + " = " + seed.x()[i].to_string() + "\n";
  for (int i = 0; i < seed.rank(); ++i) out += "y" + std::to_string(i + 1) + " = " + seed.y()[i].to_string() + "\n";
  return out;
}

/// 1-based word parsing from "1,2,1", "[1,2,1]" or "1 2 1".
inline MutationWord parse_word(const std::string& text, int n) {
  MutationWord w;
  std::string digits;
  auto flush = [&] {
    if (digits.empty()) return;
    int k = 0;
    for (char c : digits) {
      k = k * 10 + (c - '0');
      if (k > 1000000) throw InputError("direction out of range in word");
    }
    if (k < 1 || k > n) throw InputError("direction " + digits + " out of range 1.." + std::to_string(n));
    w.push_back(k - 1);
    digits.clear();
  };
  for (char c : text) {
    if (c >= '0' && c <= '9') {
      digits += c;
    } else if (c == ',' || c == ' ' || c == '[' || c == ']' || c == '(' || c == ')') {
      flush();
    } else {
      throw InputError(std::string("unexpected character '") + c + "' in word");
    }
  }
  flush();
  return w;
}

inline json word_to_json(const MutationWord& w) {
  json out = json::array();
  for (int k : w) out.push_back(k + 1);
  return out;
}

/// One vertex of a pattern dump: B, C, G, F and the seed variables at w.
template <SemifieldInstance S>
json vertex_to_json(const Pattern<S>& pattern, const MutationWord& w) {
  const auto seed = pattern.seed_at(w);
  const auto data = pattern.recurrence_at(w);
  json j;
  j["word"] = word_to_json(w);
  j["B"] = matrix_to_json(seed->B().matrix());
  j["C"] = matrix_to_json(data->C);
  j["G"] = matrix_to_json(data->G);
  json f = json::array(), x = json::array(), y = json::array();
  for (const auto& p : data->F) f.push_back(poly_to_json(p));
  for (const auto& v : seed->x()) x.push_back(to_json(v));
  for (const auto& v : seed->y()) y.push_back(to_json(v));
  j["F"] = f;
  j["x"] = x;
  j["y"] = y;
  return j;
}

template <SemifieldInstance S>
std::string vertex_to_text(const Pattern<S>& pattern, const MutationWord& w) {
  const auto seed = pattern.seed_at(w);
  const auto data = pattern.recurrence_at(w);
  std::string out = "word " + word_to_string(w) + "\n";
  out += "  B = " + seed->B().matrix().to_string() + "\n";
  out += "  C = " + data->C.to_string() + "\n";
  out += "  G = " + data->G.to_string() + "\n";
  for (std::size_t i = 0; i < data->F.size(); ++i)
    out += "  F" + std::to_string(i + 1) + " = " + data->F[i].to_string() + "\n";
  for (int i = 0; i < seed->rank(); ++i) out += "  x" + std::to_string(i + 1) + " = " + seed->x()[i].to_string() + "\n";
  for (int i = 0; i < seed->rank(); ++i) out += "  y" + std::to_string(i + 1) + " = " + seed->y()[i].to_string() + "\n";
  return out;
}

inline json pairs_to_json(const std::vector<std::pair<std::string, std::string>>& pairs) {
  json out = json::object();
  for (const auto& [k, v] : pairs) out[k] = v;
  return out;
}

/// {check, params, vertices_checked, failures: [{word, message, data}]}.
inline json report_to_json(const CheckReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures)
    failures.push_back({{"word", word_to_json(f.word)}, {"message", f.message}, {"data", pairs_to_json(f.data)}});
  return {{"check", r.check},
          {"params", pairs_to_json(r.params)},
          {"vertices_checked", r.vertices_checked},
          {"failures", failures}};
}

inline std::string report_to_text(const CheckReport& r) {
  std::string where;
  for (const auto& [k, v] : r.params) where += (where.empty() ? "" : " ") + k + "=" + v;
  std::string out = (r.passed() ? "PASS " : "FAIL ") + r.check + " (" + where + ") " +
                    std::to_string(r.vertices_checked) + " vertices\n";
  for (const auto& f : r.failures) {
    out += "  at " + word_to_string(f.word) + ": " + f.message + "\n";
    for (const auto& [k, v] : f.data) out += "    " + k + " = " + v + "\n";
  }
  return out;
}

}  // namespace gencluster
