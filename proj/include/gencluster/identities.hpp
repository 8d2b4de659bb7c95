#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gencluster/errors.hpp"
#include "gencluster/golden.hpp"
#include "gencluster/matrix.hpp"
#include "gencluster/pattern.hpp"
#include "gencluster/seed.hpp"

namespace gencluster {

struct Failure {
  MutationWord word;
  std::string message;
  std::vector<std::pair<std::string, std::string>> data;
};

/// Outcome of one check over one instance. Failures carry the word and the
/// offending values; together with params they replay the failure.
struct CheckReport {
  std::string check;
  std::vector<std::pair<std::string, std::string>> params;
  std::size_t vertices_checked = 0;
  std::vector<Failure> failures;

  bool passed() const { return failures.empty(); }
};

/// An exchange matrix with mutation degrees, an exploration depth and
/// (optionally) skew-symmetrizers of DB.
struct Instance {
  std::string name;
  ExchangeMatrix B;
  std::vector<int> d;
  int depth = 0;
  std::vector<std::int64_t> R;
  std::vector<std::int64_t> R_alt;
};

inline IntMatrix scaled_left(const std::vector<int>& d, const IntMatrix& b) { return degree_matrix(d) * b; }
inline IntMatrix scaled_right(const IntMatrix& b, const std::vector<int>& d) { return b * degree_matrix(d); }

/// Lazily built patterns shared by the checks of one instance: the principal and
/// universal (d,z)-patterns on B and the ordinary principal patterns on DB and BD.
class Workbench {
 public:
  explicit Workbench(Instance inst) : inst_(std::move(inst)) {
    if (static_cast<int>(inst_.d.size()) != inst_.B.rank())
      throw InputError("mutation degrees do not match the rank of B");
    if (inst_.depth < 0) throw InputError("depth must be nonnegative");
    words_ = reduced_words(inst_.B.rank(), inst_.depth);
  }

  const Instance& instance() const { return inst_; }
  const ExchangeMatrix& B() const { return inst_.B; }
  const std::vector<int>& d() const { return inst_.d; }
  int rank() const { return inst_.B.rank(); }
  const std::vector<MutationWord>& words() const { return words_; }

  /// Directions k for which the edge w - wk stays inside the explored ball.
  std::vector<int> inner_directions(const MutationWord& w) const {
    std::vector<int> ks;
    for (int k = 0; k < rank(); ++k)
      if (static_cast<int>(w.size()) < inst_.depth || (!w.empty() && w.back() == k)) ks.push_back(k);
    return ks;
  }

  const PrincipalPattern& principal() const {
    if (!principal_) principal_ = principal_pattern(inst_.B, inst_.d);
    return *principal_;
  }
  const UniversalPattern& universal() const {
    if (!universal_) universal_ = universal_pattern(inst_.B, inst_.d);
    return *universal_;
  }
  /// Ordinary (d = 1) principal pattern on DB.
  const PrincipalPattern& ordinary_db() const {
    if (!ordinary_db_)
      ordinary_db_ = principal_pattern(ExchangeMatrix(scaled_left(inst_.d, inst_.B.matrix())), ones());
    return *ordinary_db_;
  }
  /// Ordinary (d = 1) principal pattern on BD.
  const PrincipalPattern& ordinary_bd() const {
    if (!ordinary_bd_)
      ordinary_bd_ = principal_pattern(ExchangeMatrix(scaled_right(inst_.B.matrix(), inst_.d)), ones());
    return *ordinary_bd_;
  }

  std::vector<std::pair<std::string, std::string>> params() const {
    std::string d = "[";
    for (std::size_t i = 0; i < inst_.d.size(); ++i) d += (i ? ", " : "") + std::to_string(inst_.d[i]);
    d += "]";
    return {{"instance", inst_.name}, {"B", inst_.B.matrix().to_string()}, {"d", d},
            {"depth", std::to_string(inst_.depth)}};
  }

 private:
  std::vector<int> ones() const { return std::vector<int>(inst_.d.size(), 1); }

  Instance inst_;
  std::vector<MutationWord> words_;
  mutable std::unique_ptr<PrincipalPattern> principal_;
  mutable std::unique_ptr<UniversalPattern> universal_;
  mutable std::unique_ptr<PrincipalPattern> ordinary_db_;
  mutable std::unique_ptr<PrincipalPattern> ordinary_bd_;
};

namespace detail {

inline void add_failure(CheckReport& rep, const MutationWord& w, std::string message,
                        std::vector<std::pair<std::string, std::string>> data = {}) {
  rep.failures.push_back({w, std::move(message), std::move(data)});
}

/// Runs body at every vertex; library errors become failures at that vertex.
template <class Body>
CheckReport for_each_vertex(std::string name, const Workbench& wb, Body body) {
  CheckReport rep{std::move(name), wb.params(), 0, {}};
  for (const auto& w : wb.words()) {
    ++rep.vertices_checked;
    try {
      body(w, rep);
    } catch (const Error& e) {
      add_failure(rep, w, e.what());
    }
  }
  return rep;
}

template <class T>
std::string join_strings(const std::vector<T>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + "]";
}

inline bool sign_coherent(const IntMatrix& c, std::size_t j) {
  bool pos = false;
  bool neg = false;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    pos |= c(i, j) > 0;
    neg |= c(i, j) < 0;
  }
  return (pos || neg) && !(pos && neg);
}

}  // namespace detail

/// c_matrix (tropical y-exponents) equals c_matrix_rec at every vertex.
inline CheckReport check_two_route_c(const Workbench& wb) {
  return detail::for_each_vertex("two-route-c", wb, [&](const MutationWord& w, CheckReport& rep) {
    const auto a = c_matrix(wb.principal(), w);
    const auto b = c_matrix_rec(wb.principal(), w);
    if (!(a == b))
      detail::add_failure(rep, w, "C-matrix routes differ", {{"definition", a.to_string()}, {"recurrence", b.to_string()}});
  });
}

/// g_matrix (grading) equals g_matrix_rec at every vertex.
inline CheckReport check_two_route_g(const Workbench& wb) {
  return detail::for_each_vertex("two-route-g", wb, [&](const MutationWord& w, CheckReport& rep) {
    const auto a = g_matrix(wb.principal(), w);
    const auto b = g_matrix_rec(wb.principal(), w);
    if (!(a == b))
      detail::add_failure(rep, w, "G-matrix routes differ", {{"grading", a.to_string()}, {"recurrence", b.to_string()}});
  });
}

/// f_polynomials (x = 1) equals f_polynomials_rec at every vertex.
inline CheckReport check_two_route_f(const Workbench& wb) {
  return detail::for_each_vertex("two-route-f", wb, [&](const MutationWord& w, CheckReport& rep) {
    const auto a = f_polynomials(wb.principal(), w);
    const auto b = f_polynomials_rec(wb.principal(), w);
    if (a != b)
      detail::add_failure(rep, w, "F-polynomial routes differ",
                          {{"specialization", detail::join_strings(a)}, {"recurrence", detail::join_strings(b)}});
  });
}

/// Every X-function is a Laurent polynomial in x with polynomial dependence on y, z.
inline CheckReport check_laurent(const Workbench& wb) {
  return detail::for_each_vertex("laurent", wb, [&](const MutationWord& w, CheckReport&) {
    for (int i = 0; i < wb.rank(); ++i) (void)x_function(wb.principal(), w, i);
  });
}

/// Every X-function is homogeneous for the grading deg x_i = e_i, deg y_j = -b_j.
inline CheckReport check_homogeneity(const Workbench& wb) {
  return detail::for_each_vertex("homogeneity", wb, [&](const MutationWord& w, CheckReport&) {
    const Grading grading(wb.principal().table(), wb.B().matrix());
    for (int i = 0; i < wb.rank(); ++i) (void)poly_degree(x_function(wb.principal(), w, i), grading);
  });
}

/// Sign-coherence of every c-vector and constant term 1 of every F-polynomial,
/// each tested on its own; a vertex where only one of them holds is reported too.
inline CheckReport check_sign_coherence(const Workbench& wb) {
  return detail::for_each_vertex("sign-coherence", wb, [&](const MutationWord& w, CheckReport& rep) {
    const auto c = c_matrix(wb.principal(), w);
    const auto f = f_polynomials(wb.principal(), w);
    bool all_coherent = true;
    bool all_constant_one = true;
    for (int j = 0; j < wb.rank(); ++j) {
      if (!detail::sign_coherent(c, static_cast<std::size_t>(j))) {
        all_coherent = false;
        detail::add_failure(rep, w, "c-vector " + std::to_string(j + 1) + " is not sign-coherent",
                            {{"C", c.to_string()}});
      }
      if (f[j].constant_term() != 1) {
        all_constant_one = false;
        detail::add_failure(rep, w, "F" + std::to_string(j + 1) + " does not have constant term 1",
                            {{"F", f[j].to_string()}});
      }
    }
    if (all_coherent != all_constant_one)
      detail::add_failure(rep, w, "sign-coherence and constant term 1 disagree",
                          {{"C", c.to_string()}, {"F", detail::join_strings(f)}});
  });
}

/// The tropical value of the universal Y-function is the principal y-variable.
inline CheckReport check_specialization(const Workbench& wb) {
  return detail::for_each_vertex("specialization", wb, [&](const MutationWord& w, CheckReport& rep) {
    const auto ps = wb.principal().seed_at(w);
    for (int i = 0; i < wb.rank(); ++i) {
      const auto y = y_function(wb.universal(), w, i);
      const auto t = sf_to_trop(y);
      if (!(t == ps->y()[i]))
        detail::add_failure(rep, w, "tropical value of Y" + std::to_string(i + 1) + " differs",
                            {{"Y", y.to_string()}, {"trop(Y)", t.to_string()}, {"principal", ps->y()[i].to_string()}});
    }
  });
}

/// C equals the ordinary C-matrix on DB.
inline CheckReport check_ordinary_c(const Workbench& wb) {
  return detail::for_each_vertex("ordinary-c", wb, [&](const MutationWord& w, CheckReport& rep) {
    const auto a = c_matrix(wb.principal(), w);
    const auto b = c_matrix(wb.ordinary_db(), w);
    if (!(a == b)) detail::add_failure(rep, w, "C differs from ordinary C on DB", {{"C", a.to_string()}, {"ordinary", b.to_string()}});
  });
}

/// c~ equals the ordinary C-matrix on BD.
inline CheckReport check_ordinary_ct(const Workbench& wb) {
  return detail::for_each_vertex("ordinary-ct", wb, [&](const MutationWord& w, CheckReport& rep) {
    const auto a = tilde_c(c_matrix(wb.principal(), w), wb.d());
    const auto b = c_matrix(wb.ordinary_bd(), w);
    if (!(a == b))
      detail::add_failure(rep, w, "c~ differs from ordinary C on BD", {{"c~", a.to_string()}, {"ordinary", b.to_string()}});
  });
}

/// G equals the ordinary G-matrix on BD.
inline CheckReport check_ordinary_g(const Workbench& wb) {
  return detail::for_each_vertex("ordinary-g", wb, [&](const MutationWord& w, CheckReport& rep) {
    const auto a = g_matrix(wb.principal(), w);
    const auto b = g_matrix(wb.ordinary_bd(), w);
    if (!(a == b)) detail::add_failure(rep, w, "G differs from ordinary G on BD", {{"G", a.to_string()}, {"ordinary", b.to_string()}});
  });
}

/// g~ equals the ordinary G-matrix on DB.
inline CheckReport check_ordinary_gt(const Workbench& wb) {
  return detail::for_each_vertex("ordinary-gt", wb, [&](const MutationWord& w, CheckReport& rep) {
    const auto a = tilde_g(g_matrix(wb.principal(), w), wb.d());
    const auto b = g_matrix(wb.ordinary_db(), w);
    if (!(a == b))
      detail::add_failure(rep, w, "g~ differs from ordinary G on DB", {{"g~", a.to_string()}, {"ordinary", b.to_string()}});
  });
}

/// R^{-1} D^{-1} G^T D R C for one vertex.
inline RationalMatrix duality_product(const IntMatrix& g, const IntMatrix& c, const std::vector<int>& d,
                                      const std::vector<std::int64_t>& r) {
  std::vector<Rational> dr;
  std::vector<Rational> dr_inv;
  for (std::size_t i = 0; i < d.size(); ++i) {
    dr.emplace_back(Rational(d[i]) * r[i]);
    dr_inv.emplace_back(1 / (Rational(d[i]) * r[i]));
  }
  return rational_diagonal(dr_inv) * RationalMatrix(g.transpose()) * rational_diagonal(dr) * RationalMatrix(c);
}

/// R^{-1} D^{-1} (G^t)^T D R C^t = I at every vertex. Throws
/// InvalidSkewsymmetrizer unless RDB is skew-symmetric.
inline CheckReport check_duality(const Workbench& wb, const std::vector<std::int64_t>& r) {
  const IntMatrix db = scaled_left(wb.d(), wb.B().matrix());
  if (!is_skew_symmetrizer(db, r)) throw InvalidSkewsymmetrizer("R does not make RDB skew-symmetric");
  std::string rs = "[";
  for (std::size_t i = 0; i < r.size(); ++i) rs += (i ? ", " : "") + std::to_string(r[i]);
  rs += "]";
  auto rep = detail::for_each_vertex("duality", wb, [&](const MutationWord& w, CheckReport& rep) {
    const auto c = c_matrix(wb.principal(), w);
    const auto g = g_matrix(wb.principal(), w);
    if (!duality_product(g, c, wb.d(), r).is_identity())
      detail::add_failure(rep, w, "duality fails", {{"C", c.to_string()}, {"G", g.to_string()}, {"R", rs}});
  });
  rep.params.emplace_back("R", rs);
  return rep;
}

/// Y^t_i = prod_j y_j^{c_ji} prod_j F_j^{b^t_ji} in the universal semifield,
/// with C and F from the principal pattern.
inline CheckReport check_separation_y(const Workbench& wb) {
  return detail::for_each_vertex("separation-y", wb, [&](const MutationWord& w, CheckReport& rep) {
    const auto& table = wb.universal().table();
    const auto c = c_matrix(wb.principal(), w);
    const auto f = f_polynomials(wb.principal(), w);
    const auto& bt = wb.principal().seed_at(w)->B();
    std::vector<SfRational> fs;
    for (const auto& p : f) fs.push_back(Universal::evaluate(p));
    for (int i = 0; i < wb.rank(); ++i) {
      SfRational rhs = SfRational::one(table);
      for (int j = 0; j < wb.rank(); ++j) {
        if (c(j, i) != 0)
          rhs = rhs * SfRational::generator(table, table->y(j), static_cast<std::int32_t>(c(j, i)));
        if (bt(j, i) != 0) rhs = rhs * pow(fs[j], bt(j, i));
      }
      const auto lhs = y_function(wb.universal(), w, i);
      if (!(lhs == rhs))
        detail::add_failure(rep, w, "y-separation fails for i = " + std::to_string(i + 1),
                            {{"Y", lhs.to_string()}, {"formula", rhs.to_string()}});
    }
  });
}

/// x^t_i = x^{g_i} F_i(yhat, z) / F_i|_P(y, z) in the universal pattern, with G
/// and F from the principal pattern.
inline CheckReport check_separation_x(const Workbench& wb) {
  return detail::for_each_vertex("separation-x", wb, [&](const MutationWord& w, CheckReport& rep) {
    const auto& table = wb.universal().table();
    const auto g = g_matrix(wb.principal(), w);
    const auto f = f_polynomials(wb.principal(), w);
    const auto yh = yhat(wb.universal().initial());
    Substitution sigma(table->size());
    for (int j = 0; j < wb.rank(); ++j) sigma[table->y(j)] = yh[j];
    const auto us = wb.universal().seed_at(w);
    for (int i = 0; i < wb.rank(); ++i) {
      SfRational rhs = SfRational::one(table);
      for (int j = 0; j < wb.rank(); ++j)
        if (g(j, i) != 0) rhs = rhs * SfRational::generator(table, table->x(j), static_cast<std::int32_t>(g(j, i)));
      rhs = rhs * poly_substitute(f[i], sigma);
      rhs = rhs / Universal::evaluate(f[i]);
      if (!(us->x()[i] == rhs))
        detail::add_failure(rep, w, "x-separation fails for i = " + std::to_string(i + 1),
                            {{"x", us->x()[i].to_string()}, {"formula", rhs.to_string()}});
    }
  });
}

/// yhat of the mutated seed equals the yhat-mutation rule applied to yhat, for both signs.
template <SemifieldInstance S>
void yhat_mutation_at(const Seed<S>& seed, const MutationWord& w, const std::vector<int>& ks, CheckReport& rep) {
  const auto yh = yhat(seed);
  for (int k : ks) {
    const auto lhs = yhat(mutate_seed(seed, k));
    for (int eps : {1, -1}) {
      const auto rhs = mutate_yhat(yh, seed, k, eps);
      for (int i = 0; i < seed.rank(); ++i)
        if (!(lhs[i] == rhs[i]))
          detail::add_failure(rep, w, std::string(S::name) + ": yhat" + std::to_string(i + 1) + " after mutation at " +
                                          std::to_string(k + 1) + " (eps " + std::to_string(eps) + ") differs",
                              {{"mutated", lhs[i].to_string()}, {"rule", rhs[i].to_string()}});
    }
  }
}

inline CheckReport check_yhat_mutation(const Workbench& wb) {
  return detail::for_each_vertex("yhat-mutation", wb, [&](const MutationWord& w, CheckReport& rep) {
    const auto ks = wb.inner_directions(w);
    yhat_mutation_at(*wb.universal().seed_at(w), w, ks, rep);
    yhat_mutation_at(*wb.principal().seed_at(w), w, ks, rep);
  });
}

/// mu_k(mu_k(seed)) = seed for every k, in both semifields.
inline CheckReport check_involution(const Workbench& wb) {
  return detail::for_each_vertex("involution", wb, [&](const MutationWord& w, CheckReport& rep) {
    const auto ks = wb.inner_directions(w);
    auto one = [&](const auto& seed) {
      for (int k : ks)
        if (!(mutate_seed(mutate_seed(seed, k), k) == seed))
          detail::add_failure(rep, w, "mutation at " + std::to_string(k + 1) + " is not an involution");
    };
    one(*wb.principal().seed_at(w));
    one(*wb.universal().seed_at(w));
  });
}

/// The mutation formulas for x, y and the C/G/F recurrences give the same result for eps = +1 and -1.
inline CheckReport check_epsilon(const Workbench& wb) {
  return detail::for_each_vertex("epsilon", wb, [&](const MutationWord& w, CheckReport& rep) {
    const auto ks = wb.inner_directions(w);
    auto one = [&](const auto& seed) {
      for (int k : ks) {
        const auto yp = mutate_y(seed, k, 1);
        const auto ym = mutate_y(seed, k, -1);
        const auto xp = mutate_x(seed, k, 1);
        const auto xm = mutate_x(seed, k, -1);
        for (int i = 0; i < seed.rank(); ++i) {
          if (!(yp[i] == ym[i]))
            detail::add_failure(rep, w, "y" + std::to_string(i + 1) + " after mutation at " + std::to_string(k + 1) +
                                            " depends on eps",
                                {{"eps=+1", yp[i].to_string()}, {"eps=-1", ym[i].to_string()}});
          if (!(xp[i] == xm[i]))
            detail::add_failure(rep, w, "x" + std::to_string(i + 1) + " after mutation at " + std::to_string(k + 1) +
                                            " depends on eps",
                                {{"eps=+1", xp[i].to_string()}, {"eps=-1", xm[i].to_string()}});
        }
      }
    };
    one(*wb.principal().seed_at(w));
    one(*wb.universal().seed_at(w));
    const auto& pat = wb.principal();
    const auto data = pat.recurrence_at(w);
    for (int k : ks) {
      const auto a = principal_step(*data, pat.initial_B(), pat.table(), k, 1);
      const auto b = principal_step(*data, pat.initial_B(), pat.table(), k, -1);
      if (!(a.C == b.C) || !(a.G == b.G) || a.F != b.F)
        detail::add_failure(rep, w, "C/G/F recurrence at " + std::to_string(k + 1) + " depends on eps",
                            {{"C(+1)", a.C.to_string()}, {"C(-1)", b.C.to_string()},
                             {"G(+1)", a.G.to_string()}, {"G(-1)", b.G.to_string()}});
    }
  });
}

/// p-coefficient bridge at one seed: normalization, quasi-reciprocity, recovery
/// of (y, z), and p_from_yz o mutate_seed = mutate_p o p_from_yz for every k.
template <SemifieldInstance S>
void bridge_at(const Seed<S>& seed, const MutationWord& w, const std::vector<int>& ks, CheckReport& rep) {
  const auto& table = seed.table();
  const std::string tag(S::name);
  const auto p = p_from_yz(seed);
  check_normalization(p, table);
  const auto rec = yz_from_p(p, table);
  for (int i = 0; i < seed.rank(); ++i) {
    if (!(rec.y[i] == seed.y()[i]))
      detail::add_failure(rep, w, tag + ": recovered y" + std::to_string(i + 1) + " differs",
                          {{"recovered", rec.y[i].to_string()}, {"seed", seed.y()[i].to_string()}});
    for (std::size_t s = 0; s < rec.data.z[i].size(); ++s)
      if (!(rec.data.z[i][s] == seed.data().z[i][s]))
        detail::add_failure(rep, w, tag + ": recovered z_" + std::to_string(i + 1) + "_" + std::to_string(s) + " differs",
                            {{"recovered", rec.data.z[i][s].to_string()}});
  }
  for (int k : ks) {
    const auto lhs = p_from_yz(mutate_seed(seed, k));
    const auto rhs = mutate_p(p, seed.B().matrix(), seed.degrees(), k);
    check_normalization(rhs, table);
    if (!(lhs == rhs)) detail::add_failure(rep, w, tag + ": p-mutation at " + std::to_string(k + 1) + " does not commute");
    for (std::size_t i = 0; i < rhs.p.size(); ++i) (void)quasi_reciprocity_root(rhs, i);
  }
}

inline CheckReport check_bridge(const Workbench& wb, bool universal = false) {
  return detail::for_each_vertex(universal ? "bridge" : "bridge-principal", wb,
                                 [&](const MutationWord& w, CheckReport& rep) {
                                   const auto ks = wb.inner_directions(w);
                                   bridge_at(*wb.principal().seed_at(w), w, ks, rep);
                                   if (universal) bridge_at(*wb.universal().seed_at(w), w, ks, rep);
                                 });
}

/// Golden example as a check report: one failure per mismatching row.
inline CheckReport golden_report(const GoldenFixture& fx, GoldenReport* out = nullptr) {
  CheckReport rep{"golden", {{"instance", fx.name}}, 0, {}};
  GoldenReport g = run_golden(fx);
  rep.vertices_checked = fx.word.size() + 1;
  for (const auto& row : g.rows)
    if (!row.ok)
      detail::add_failure(rep, MutationWord(fx.word.begin(), fx.word.begin() + std::min<std::size_t>(row.t - 1, fx.word.size())),
                          "t=" + std::to_string(row.t) + " " + row.item + " mismatch",
                          {{"expected", row.expected}, {"computed", row.computed}});
  if (out) *out = std::move(g);
  return rep;
}

/// Names accepted by run_check.
inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "two-route-c",  "two-route-g",  "two-route-f",    "laurent",       "homogeneity",   "sign-coherence",
      "specialization", "ordinary-c", "ordinary-ct",    "ordinary-g",    "ordinary-gt",   "duality",
      "separation-y", "separation-x", "yhat-mutation",  "involution",    "epsilon",       "bridge"};
  return names;
}

/// Runs one named check. "duality" uses R and, when present, R_alt; "bridge"
/// covers the universal pattern only when requested.
inline std::vector<CheckReport> run_check(const Workbench& wb, const std::string& name, bool universal_bridge = false) {
  if (name == "two-route-c") return {check_two_route_c(wb)};
  if (name == "two-route-g") return {check_two_route_g(wb)};
  if (name == "two-route-f") return {check_two_route_f(wb)};
  if (name == "laurent") return {check_laurent(wb)};
  if (name == "homogeneity") return {check_homogeneity(wb)};
  if (name == "sign-coherence") return {check_sign_coherence(wb)};
  if (name == "specialization") return {check_specialization(wb)};
  if (name == "ordinary-c") return {check_ordinary_c(wb)};
  if (name == "ordinary-ct") return {check_ordinary_ct(wb)};
  if (name == "ordinary-g") return {check_ordinary_g(wb)};
  if (name == "ordinary-gt") return {check_ordinary_gt(wb)};
  if (name == "duality") {
    if (wb.instance().R.empty()) throw InvalidSkewsymmetrizer("duality needs a skew-symmetrizer R");
    std::vector<CheckReport> out{check_duality(wb, wb.instance().R)};
    if (!wb.instance().R_alt.empty()) out.push_back(check_duality(wb, wb.instance().R_alt));
    return out;
  }
  if (name == "separation-y") return {check_separation_y(wb)};
  if (name == "separation-x") return {check_separation_x(wb)};
  if (name == "yhat-mutation") return {check_yhat_mutation(wb)};
  if (name == "involution") return {check_involution(wb)};
  if (name == "epsilon") return {check_epsilon(wb)};
  if (name == "bridge") return {check_bridge(wb, universal_bridge)};
  throw InputError("unknown check: " + name);
}

inline std::vector<CheckReport> run_all_checks(const Workbench& wb, bool universal_bridge = false) {
  std::vector<CheckReport> out;
  for (const auto& name : check_names()) {
    auto r = run_check(wb, name, universal_bridge);
    out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  }
  return out;
}

/// Convenience forms taking (B, d, depth).
inline CheckReport check_ordinary_c(const ExchangeMatrix& b, const std::vector<int>& d, int depth) {
  return check_ordinary_c(Workbench({"custom", b, d, depth, {}, {}}));
}
inline CheckReport check_ordinary_ct(const ExchangeMatrix& b, const std::vector<int>& d, int depth) {
  return check_ordinary_ct(Workbench({"custom", b, d, depth, {}, {}}));
}
inline CheckReport check_ordinary_g(const ExchangeMatrix& b, const std::vector<int>& d, int depth) {
  return check_ordinary_g(Workbench({"custom", b, d, depth, {}, {}}));
}
inline CheckReport check_ordinary_gt(const ExchangeMatrix& b, const std::vector<int>& d, int depth) {
  return check_ordinary_gt(Workbench({"custom", b, d, depth, {}, {}}));
}
inline CheckReport check_duality(const ExchangeMatrix& b, const std::vector<int>& d,
                                 const std::vector<std::int64_t>& r, int depth) {
  return check_duality(Workbench({"custom", b, d, depth, r, {}}), r);
}
inline CheckReport check_separation_y(const ExchangeMatrix& b, const std::vector<int>& d, int depth) {
  return check_separation_y(Workbench({"custom", b, d, depth, {}, {}}));
}
inline CheckReport check_separation_x(const ExchangeMatrix& b, const std::vector<int>& d, int depth) {
  return check_separation_x(Workbench({"custom", b, d, depth, {}, {}}));
}
inline CheckReport check_yhat_mutation(const ExchangeMatrix& b, const std::vector<int>& d, int depth) {
  return check_yhat_mutation(Workbench({"custom", b, d, depth, {}, {}}));
}

// ---------------------------------------------------------------------------
// Instances

/// Skew-symmetrizer of an acyclic sign pattern, by propagation along each
/// connected component (rooted at its smallest index, r = 1 there before scaling
/// to coprime integers). Component c is further multiplied by scale[c] when given.
inline std::vector<std::int64_t> tree_skewsymmetrizer(const IntMatrix& m, const std::vector<std::int64_t>& scale = {}) {
  const std::size_t n = m.rows();
  std::vector<std::optional<Rational>> r(n);
  std::vector<int> component(n, -1);
  int comps = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (r[root]) continue;
    r[root] = Rational(1);
    component[root] = comps;
    std::vector<std::size_t> stack{root};
    std::vector<std::size_t> members{root};
    while (!stack.empty()) {
      const auto i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        if (m(i, j) == 0) continue;
        // r_i m_ij = -r_j m_ji
        const Rational rj = *r[i] * m(i, j) / Rational(-m(j, i));
        if (r[j]) {
          if (*r[j] != rj) throw InvalidSkewsymmetrizer("sign pattern admits no skew-symmetrizer");
          continue;
        }
        r[j] = rj;
        component[j] = comps;
        stack.push_back(j);
        members.push_back(j);
      }
    }
    Integer l = 1;
    for (auto i : members) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(*r[i]));
    Integer g = 0;
    for (auto i : members) {
      r[i] = *r[i] * l;
      g = integer_gcd(g, boost::multiprecision::numerator(*r[i]));
    }
    for (auto i : members) r[i] = *r[i] / g;
    ++comps;
  }
  std::vector<std::int64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t v = static_cast<std::int64_t>(boost::multiprecision::numerator(*r[i]));
    if (static_cast<std::size_t>(component[i]) < scale.size()) v *= scale[component[i]];
    out[i] = v;
  }
  return out;
}

/// Number of connected components of the graph with edges b_ij != 0.
inline int component_count(const IntMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  int count = static_cast<int>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (m(i, j) != 0) {
        const int a = find(static_cast<int>(i));
        const int b = find(static_cast<int>(j));
        if (a != b) {
          parent[a] = b;
          --count;
        }
      }
  return count;
}

/// Size estimate for F-polynomials along all reduced words of each length.
/// With positive coefficients nothing cancels, so the per-generator degrees of
/// F' follow exactly from those of F: degrees add under products, take maxima
/// under sums and subtract under the exact division by F_k. The volume of a
/// polynomial is the product of (degree + 1) over its generators.
inline std::vector<double> f_volume_profile(const IntMatrix& b0, const std::vector<int>& d, int max_depth) {
  struct Node {
    MutationWord w;
    IntMatrix B, C;
    std::vector<std::vector<std::int64_t>> deg;  // deg[j][g]
  };
  const auto table = VariableTable::make(d);
  const int n = table->rank();
  const std::size_t size = table->size();
  std::vector<Node> level{{{}, b0, IntMatrix::identity(n), std::vector<std::vector<std::int64_t>>(n, std::vector<std::int64_t>(size, 0))}};
  std::vector<double> out{1.0};
  for (int len = 1; len <= max_depth; ++len) {
    std::vector<Node> next;
    double worst = 1.0;
    for (const auto& node : level)
      for (int k = 0; k < n; ++k) {
        if (!node.w.empty() && node.w.back() == k) continue;
        Node m{node.w, mutate_matrix(node.B, d, k), c_matrix_step(node.C, node.B, d, k, 1), node.deg};
        m.w.push_back(k);
        std::vector<std::int64_t> dm(size, 0), dp(size, 0);
        for (int j = 0; j < n; ++j) {
          dm[table->y(j)] += positive_part(-node.C(j, k));
          dp[table->y(j)] += positive_part(node.C(j, k));
          for (std::size_t g = 0; g < size; ++g) {
            dm[g] += positive_part(-node.B(j, k)) * node.deg[j][g];
            dp[g] += positive_part(node.B(j, k)) * node.deg[j][g];
          }
        }
        std::vector<std::int64_t> top(size, 0);
        for (int s = 0; s <= d[k]; ++s) {
          const auto z = table->z(k, s);
          for (std::size_t g = 0; g < size; ++g) {
            std::int64_t v = (d[k] - s) * dm[g] + s * dp[g] + (z && *z == g ? 1 : 0);
            top[g] = std::max(top[g], v);
          }
        }
        for (std::size_t g = 0; g < size; ++g) m.deg[k][g] = top[g] - node.deg[k][g];
        for (const auto& fj : m.deg) {
          double vol = 1.0;
          for (auto e : fj) vol *= static_cast<double>(e + 1);
          worst = std::max(worst, vol);
        }
        next.push_back(std::move(m));
      }
    out.push_back(worst);
    level = std::move(next);
  }
  return out;
}

/// Largest depth <= max_depth whose F-polynomials stay within the volume limit
/// (at least 1 when max_depth >= 1).
inline int tractable_depth(const IntMatrix& b0, const std::vector<int>& d, int max_depth, double volume_limit) {
  const auto profile = f_volume_profile(b0, d, max_depth);
  int depth = max_depth >= 1 ? 1 : 0;
  for (int len = 2; len <= max_depth; ++len) {
    if (profile[len] > volume_limit) break;
    depth = len;
  }
  return depth;
}

struct SweepOptions {
  int count = 24;
  int rank = 0;  // 0: mixed ranks 2 and 3
  int max_entry = 3;
  int max_degree = 3;
  int max_depth = 5;
  double volume_limit = 2e5;
};

/// Random instance with an acyclic (tree or forest) sign pattern, |b_ij| <= max_entry,
/// d_i <= max_degree, R from tree propagation and, for forests, a second R that
/// rescales one component.
inline Instance random_tree_instance(std::mt19937_64& rng, const SweepOptions& opt, int index) {
  auto draw = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  const int n = opt.rank > 0 ? opt.rank : draw(2, 3);
  IntMatrix b(n, n);
  // Random labelled tree via a random parent for each vertex after a shuffle.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[draw(0, i)]);
  for (int v = 1; v < n; ++v) {
    const int i = order[v];
    const int j = order[draw(0, v - 1)];
    if (n > 1 && draw(0, 7) == 0) continue;  // occasionally drop the edge
    const int sign = draw(0, 1) ? 1 : -1;
    b(i, j) = sign * draw(1, opt.max_entry);
    b(j, i) = -sign * draw(1, opt.max_entry);
  }
  std::vector<int> d(n);
  for (auto& v : d) v = draw(1, opt.max_degree);
  Instance inst;
  inst.name = "random-" + std::to_string(index);
  inst.B = ExchangeMatrix(b);
  inst.d = d;
  const IntMatrix db = scaled_left(d, b);
  inst.R = tree_skewsymmetrizer(db);
  const int comps = component_count(b);
  if (comps > 1) {
    std::vector<std::int64_t> scale(comps, 1);
    scale[0] = 2;
    inst.R_alt = tree_skewsymmetrizer(db, scale);
  }
  inst.depth = tractable_depth(b, d, opt.max_depth, opt.volume_limit);
  return inst;
}

inline std::vector<Instance> random_instances(std::uint64_t seed, const SweepOptions& opt = {}) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  for (int i = 0; i < opt.count; ++i) out.push_back(random_tree_instance(rng, opt, i + 1));
  return out;
}

/// The d = (2,1) example with B = [[0,-1],[1,0]].
inline Instance b2_instance(int depth = 6) {
  return {"B2", ExchangeMatrix{{0, -1}, {1, 0}}, {2, 1}, depth, {1, 2}, {}};
}

}  // namespace gencluster
