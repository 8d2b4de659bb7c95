#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gencluster/errors.hpp"
#include "gencluster/expr.hpp"
#include "gencluster/pattern.hpp"

namespace gencluster {

/// Transcribed example data: x/y-variables per seed and C, G, F per vertex.
struct GoldenFixture {
  struct SeedRow {
    int t = 0;
    std::vector<std::string> x;
    std::vector<std::string> y;
  };
  struct PrincipalRow {
    int t = 0;
    IntMatrix C;
    IntMatrix G;
    std::vector<std::string> F;
  };

  std::string name;
  std::vector<int> d;
  IntMatrix B;
  std::map<std::string, std::string> aliases;
  MutationWord word;  // 0-based
  std::vector<SeedRow> seeds;
  std::vector<PrincipalRow> principal;
};

namespace detail {

inline IntMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw InputError("matrix must be a nonempty array of rows");
  IntMatrix m(j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != m.cols()) throw InputError("ragged matrix");
    for (std::size_t k = 0; k < m.cols(); ++k) {
      if (!j[i][k].is_number_integer()) throw InputError("matrix entries must be integers");
      m(i, k) = j[i][k].get<std::int64_t>();
    }
  }
  return m;
}

}  // namespace detail

inline GoldenFixture golden_from_json(const nlohmann::json& j) {
  try {
    GoldenFixture g;
    g.name = j.value("name", "example");
    g.d = j.at("d").get<std::vector<int>>();
    g.B = detail::matrix_from_json(j.at("B"));
    if (j.contains("aliases")) g.aliases = j.at("aliases").get<std::map<std::string, std::string>>();
    for (int k : j.at("word").get<std::vector<int>>()) g.word.push_back(k - 1);
    for (const auto& s : j.at("seeds"))
      g.seeds.push_back({s.at("t").get<int>(), s.at("x").get<std::vector<std::string>>(),
                         s.at("y").get<std::vector<std::string>>()});
    for (const auto& p : j.at("principal"))
      g.principal.push_back({p.at("t").get<int>(), detail::matrix_from_json(p.at("C")),
                             detail::matrix_from_json(p.at("G")), p.at("F").get<std::vector<std::string>>()});
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed golden fixture: ") + e.what());
  }
}

inline GoldenFixture golden_from_string(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("golden fixture is not valid JSON: ") + e.what());
  }
  return golden_from_json(j);
}

struct GoldenRow {
  int t = 0;
  std::string item;
  std::string expected;
  std::string computed;
  bool ok = false;
};

struct GoldenReport {
  std::vector<GoldenRow> rows;
  int seeds_total = 0;
  int seeds_matched = 0;
  int c_total = 0;
  int c_matched = 0;
  int g_total = 0;
  int g_matched = 0;
  int f_total = 0;
  int f_matched = 0;
  bool periodic_universal = false;
  bool periodic_principal = false;

  bool passed() const {
    return seeds_matched == seeds_total && c_matched == c_total && g_matched == g_total && f_matched == f_total &&
           periodic_universal && periodic_principal;
  }

  const GoldenRow* first_mismatch() const {
    for (const auto& r : rows)
      if (!r.ok) return &r;
    return nullptr;
  }

  std::string summary() const {
    return std::to_string(seeds_matched) + "/" + std::to_string(seeds_total) + " seeds match, " +
           std::to_string(c_matched) + " C, " + std::to_string(g_matched) + " G, " + std::to_string(f_matched) +
           " F-polynomials match";
  }
};

/// Replays the fixture word in the universal and principal patterns and compares
/// every transcribed value, the rule B(t) = (-1)^{t+1} B and the return Σ(end) = Σ(1).
inline GoldenReport run_golden(const GoldenFixture& fx) {
  const ExchangeMatrix b(fx.B);
  auto universal = universal_pattern(b, fx.d);
  auto principal = principal_pattern(b, fx.d);
  const auto& table = universal->table();
  auto parser = [&](OplusMode mode) {
    ExpressionParser p(table, mode);
    p.with_exchange_matrix(fx.B);
    for (const auto& [k, v] : fx.aliases) p.with_alias(k, v);
    return p;
  };
  const ExpressionParser uparse = parser(OplusMode::universal);
  const ExpressionParser tparse = parser(OplusMode::tropical);

  auto prefix = [&](int t) {
    if (t < 1 || static_cast<std::size_t>(t - 1) > fx.word.size()) throw InputError("fixture row t out of range");
    return MutationWord(fx.word.begin(), fx.word.begin() + (t - 1));
  };

  GoldenReport rep;
  auto record = [&](int t, std::string item, std::string expected, std::string computed, bool ok) {
    rep.rows.push_back({t, std::move(item), std::move(expected), std::move(computed), ok});
    return ok;
  };

  for (const auto& row : fx.seeds) {
    const auto w = prefix(row.t);
    const auto us = universal->seed_at(w);
    const auto ps = principal->seed_at(w);
    const int n = us->rank();
    if (static_cast<int>(row.x.size()) != n || static_cast<int>(row.y.size()) != n)
      throw InputError("fixture seed row has the wrong length");
    bool all = true;
    for (int i = 0; i < n; ++i) {
      const auto name = std::to_string(i + 1);
      const auto xu = uparse.parse(row.x[i]);
      all &= record(row.t, "x" + name, row.x[i], us->x()[i].to_string(), xu == us->x()[i]);
      const auto yu = uparse.parse(row.y[i]);
      all &= record(row.t, "y" + name, row.y[i], us->y()[i].to_string(), yu == us->y()[i]);
      const auto xp = tparse.parse(row.x[i]);
      all &= record(row.t, "x" + name + " (principal)", row.x[i], ps->x()[i].to_string(), xp == ps->x()[i]);
      const auto yp = tparse.parse(row.y[i]).to_trop();
      all &= record(row.t, "y" + name + " (principal)", row.y[i], ps->y()[i].to_string(), yp == ps->y()[i]);
    }
    const IntMatrix expected_b = row.t % 2 == 1 ? fx.B : -fx.B;
    all &= record(row.t, "B", expected_b.to_string(), us->B().matrix().to_string(),
                  us->B().matrix() == expected_b && ps->B().matrix() == expected_b);
    ++rep.seeds_total;
    if (all) ++rep.seeds_matched;
  }

  for (const auto& row : fx.principal) {
    const auto w = prefix(row.t);
    const auto c = c_matrix(*principal, w);
    const auto c_rec = c_matrix_rec(*principal, w);
    ++rep.c_total;
    if (record(row.t, "C", row.C.to_string(), c.to_string(), c == row.C && c_rec == row.C)) ++rep.c_matched;
    const auto g = g_matrix(*principal, w);
    const auto g_rec = g_matrix_rec(*principal, w);
    ++rep.g_total;
    if (record(row.t, "G", row.G.to_string(), g.to_string(), g == row.G && g_rec == row.G)) ++rep.g_matched;
    const auto f = f_polynomials(*principal, w);
    const auto f_rec = f_polynomials_rec(*principal, w);
    if (row.F.size() != f.size()) throw InputError("fixture F row has the wrong length");
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto expected = uparse.parse(row.F[i]).as_laurent_poly();
      if (!expected) throw InputError("fixture F-polynomial is not a polynomial: " + row.F[i]);
      ++rep.f_total;
      if (record(row.t, "F" + std::to_string(i + 1), row.F[i], f[i].to_string(),
                 f[i] == *expected && f_rec[i] == *expected))
        ++rep.f_matched;
    }
  }

  rep.periodic_universal = *universal->seed_at(fx.word) == universal->initial();
  rep.periodic_principal = *principal->seed_at(fx.word) == principal->initial();
  record(static_cast<int>(fx.word.size()) + 1, "periodicity (universal)", "initial seed",
         rep.periodic_universal ? "initial seed" : "different seed", rep.periodic_universal);
  record(static_cast<int>(fx.word.size()) + 1, "periodicity (principal)", "initial seed",
         rep.periodic_principal ? "initial seed" : "different seed", rep.periodic_principal);
  return rep;
}

}  // namespace gencluster
