#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "gencluster/errors.hpp"
#include "gencluster/matrix.hpp"
#include "gencluster/poly.hpp"
#include "gencluster/seed.hpp"
#include "gencluster/semifield.hpp"

namespace gencluster {

/// Directions are 0-based here; user-facing I/O converts from 1-based.
using MutationWord = std::vector<int>;

/// Cancels adjacent repetitions k,k.
inline MutationWord reduce_word(const MutationWord& w) {
  MutationWord r;
  for (int k : w) {
    if (!r.empty() && r.back() == k) {
      r.pop_back();
    } else {
      r.push_back(k);
    }
  }
  return r;
}

/// All reduced words of length <= depth, by length and then lexicographically.
inline std::vector<MutationWord> reduced_words(int n, int depth) {
  std::vector<MutationWord> out{MutationWord{}};
  std::size_t begin = 0;
  for (int len = 1; len <= depth; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (int k = 0; k < n; ++k) {
        if (!out[i].empty() && out[i].back() == k) continue;
        MutationWord w = out[i];
        w.push_back(k);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

inline std::string word_to_string(const MutationWord& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(w[i] + 1);
  }
  return s + ")";
}

/// B, C, G and F at one vertex of a principal-coefficient pattern, as produced by
/// the recurrences.
struct PrincipalData {
  IntMatrix B;
  IntMatrix C;
  IntMatrix G;
  std::vector<LaurentPoly> F;
};

inline PrincipalData principal_initial(const TablePtr& table, const IntMatrix& b0) {
  const auto n = static_cast<std::size_t>(table->rank());
  return {b0, IntMatrix::identity(n), IntMatrix::identity(n), std::vector<LaurentPoly>(n, LaurentPoly::one(table))};
}

/// c-vector recurrence:
/// c'_ij = -c_ik (j = k), c_ij + c_ik [eps d_k b_kj]_+ + [-eps c_ik]_+ d_k b_kj (j != k).
inline IntMatrix c_matrix_step(const IntMatrix& c, const IntMatrix& b, const std::vector<int>& d, int k, int eps) {
  const auto n = c.rows();
  const auto kk = static_cast<std::size_t>(k);
  const std::int64_t dk = d.at(kk);
  IntMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == kk) {
        r(i, j) = -c(i, kk);
      } else {
        const auto dkb = checked_mul(dk, b(kk, j));
        r(i, j) = checked_add(checked_add(c(i, j), checked_mul(c(i, kk), positive_part(eps * dkb))),
                              checked_mul(positive_part(-eps * c(i, kk)), dkb));
      }
    }
  return r;
}

/// g-vector recurrence (b0 is the initial exchange matrix):
/// g'_ik = -g_ik + sum_l g_il [-eps b_lk d_k]_+ - sum_l b0_il [-eps c_lk d_k]_+.
inline IntMatrix g_matrix_step(const IntMatrix& g, const IntMatrix& c, const IntMatrix& b, const IntMatrix& b0,
                               const std::vector<int>& d, int k, int eps) {
  const auto n = g.rows();
  const auto kk = static_cast<std::size_t>(k);
  const std::int64_t dk = d.at(kk);
  IntMatrix r = g;
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t v = -g(i, kk);
    for (std::size_t l = 0; l < n; ++l) {
      v = checked_add(v, checked_mul(g(i, l), positive_part(-eps * checked_mul(b(l, kk), dk))));
      v = checked_add(v, -checked_mul(b0(i, l), positive_part(-eps * checked_mul(c(l, kk), dk))));
    }
    r(i, kk) = v;
  }
  return r;
}

/// F-polynomial recurrence with denominators cleared:
/// F'_k = sum_s z_{k,s} M^{d_k-s} P^s / F_k, where
/// M = prod_j y_j^{[-eps c_jk]_+} F_j^{[-eps b_jk]_+} and P = prod_j y_j^{[eps c_jk]_+} F_j^{[eps b_jk]_+}.
inline std::vector<LaurentPoly> f_polynomials_step(const std::vector<LaurentPoly>& f, const IntMatrix& c,
                                                   const IntMatrix& b, const TablePtr& table, int k, int eps) {
  const int n = table->rank();
  const int dk = table->degree(k);
  auto side = [&](int sign) {
    ExponentVector mono(table->size());
    LaurentPoly acc = LaurentPoly::one(table);
    for (int j = 0; j < n; ++j) {
      mono[table->y(j)] = static_cast<std::int32_t>(positive_part(sign * eps * c(j, k)));
      const auto e = positive_part(sign * eps * b(j, k));
      if (e != 0) acc = acc * poly_pow(f[j], static_cast<unsigned>(e));
    }
    return acc * LaurentPoly::monomial(table, mono);
  };
  const LaurentPoly m = side(-1);
  const LaurentPoly p = side(+1);
  std::vector<LaurentPoly> m_pow{LaurentPoly::one(table)};
  std::vector<LaurentPoly> p_pow{LaurentPoly::one(table)};
  for (int s = 1; s <= dk; ++s) {
    m_pow.push_back(m_pow.back() * m);
    p_pow.push_back(p_pow.back() * p);
  }
  LaurentPoly sum = LaurentPoly::zero(table);
  for (int s = 0; s <= dk; ++s) {
    const auto z = table->z(k, s);
    LaurentPoly term = m_pow[dk - s] * p_pow[s];
    if (z) term = term * LaurentPoly::generator(table, *z);
    sum = sum + term;
  }
  std::vector<LaurentPoly> out = f;
  out[k] = poly_exact_div(sum, f[k]);
  return out;
}

/// One mutation of the recurrence data.
inline PrincipalData principal_step(const PrincipalData& t, const IntMatrix& b0, const TablePtr& table, int k,
                                    int eps = 1) {
  detail::check_direction(k, table->rank());
  detail::check_sign(eps);
  const auto& d = table->degrees();
  PrincipalData r;
  r.B = mutate_matrix(t.B, d, k);
  r.C = c_matrix_step(t.C, t.B, d, k, eps);
  r.G = g_matrix_step(t.G, t.C, t.B, b0, d, k, eps);
  r.F = f_polynomials_step(t.F, t.C, t.B, table, k, eps);
  return r;
}

/// Cluster pattern over the n-regular tree, addressed by reduced words from the
/// initial vertex. Seeds and recurrence data are memoized; entries are
/// immutable once inserted and lookups are safe from several threads.
template <SemifieldInstance S>
class Pattern {
 public:
  using SeedPtr = std::shared_ptr<const Seed<S>>;
  using DataPtr = std::shared_ptr<const PrincipalData>;

  explicit Pattern(Seed<S> initial, bool debug_epsilon = false)
      : table_(initial.table()),
        initial_(std::make_shared<const Seed<S>>(std::move(initial))),
        debug_epsilon_(debug_epsilon) {
    seeds_.emplace(MutationWord{}, initial_);
    data_.emplace(MutationWord{},
                  std::make_shared<const PrincipalData>(principal_initial(table_, initial_->B().matrix())));
  }

  Pattern(const Pattern&) = delete;
  Pattern& operator=(const Pattern&) = delete;

  const TablePtr& table() const { return table_; }
  const Seed<S>& initial() const { return *initial_; }
  const IntMatrix& initial_B() const { return initial_->B().matrix(); }
  const std::vector<int>& degrees() const { return table_->degrees(); }
  int rank() const { return table_->rank(); }
  bool debug_epsilon() const { return debug_epsilon_; }

  SeedPtr seed_at(const MutationWord& w) const {
    return walk(seeds_, w, [&](const Seed<S>& s, int k) { return mutate_seed(s, k, debug_epsilon_); });
  }

  /// Recurrence-route data (B, C, G, F) at w.
  DataPtr recurrence_at(const MutationWord& w) const {
    return walk(data_, w,
                [&](const PrincipalData& t, int k) { return principal_step(t, initial_B(), table_, k, +1); });
  }

  std::size_t memo_size() const {
    std::shared_lock lock(mutex_);
    return seeds_.size();
  }

 private:
  template <class T, class Step>
  std::shared_ptr<const T> walk(std::map<MutationWord, std::shared_ptr<const T>>& memo, const MutationWord& word,
                                Step step) const {
    const MutationWord w = reduce_word(word);
    for (int k : w) detail::check_direction(k, rank());
    std::size_t len = w.size();
    std::shared_ptr<const T> cur;
    {
      std::shared_lock lock(mutex_);
      while (true) {
        auto it = memo.find(MutationWord(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(len)));
        if (it != memo.end()) {
          cur = it->second;
          break;
        }
        --len;
      }
    }
    for (; len < w.size(); ++len) {
      auto next = std::make_shared<const T>(step(*cur, w[len]));
      std::unique_lock lock(mutex_);
      auto [it, inserted] =
          memo.try_emplace(MutationWord(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(len + 1)), next);
      cur = it->second;
    }
    return cur;
  }

  TablePtr table_;
  SeedPtr initial_;
  bool debug_epsilon_;
  mutable std::shared_mutex mutex_;
  mutable std::map<MutationWord, SeedPtr> seeds_;
  mutable std::map<MutationWord, DataPtr> data_;
};

using PrincipalPattern = Pattern<Tropical>;
using UniversalPattern = Pattern<Universal>;

/// Pattern in Trop(y, z) with formal x_i and y_i the generators.
inline TablePtr make_table(const ExchangeMatrix& b, const std::vector<int>& d) {
  if (static_cast<int>(d.size()) != b.rank()) throw InputError("mutation degrees do not match the rank of B");
  return VariableTable::make(d);
}

inline std::unique_ptr<PrincipalPattern> principal_pattern(const ExchangeMatrix& b, const std::vector<int>& d,
                                                           bool debug_epsilon = false) {
  return std::make_unique<PrincipalPattern>(Seed<Tropical>::initial(make_table(b, d), b), debug_epsilon);
}

inline std::unique_ptr<UniversalPattern> universal_pattern(const ExchangeMatrix& b, const std::vector<int>& d,
                                                           bool debug_epsilon = false) {
  return std::make_unique<UniversalPattern>(Seed<Universal>::initial(make_table(b, d), b), debug_epsilon);
}

/// X^t_i in Z[x^{+-1}, y, z]. Throws LaurentViolation if the denominator does not
/// cancel or a y/z exponent is negative.
inline LaurentPoly x_function(const PrincipalPattern& pattern, const MutationWord& w, int i) {
  detail::check_direction(i, pattern.rank());
  const auto seed = pattern.seed_at(w);
  const auto& table = pattern.table();
  auto poly = seed->x()[i].as_laurent_poly();
  if (!poly)
    throw LaurentViolation("x" + std::to_string(i + 1) + " at " + word_to_string(w) +
                           " is not a Laurent polynomial: " + seed->x()[i].to_string());
  for (const auto& t : poly->terms())
    for (std::size_t g = 0; g < table->size(); ++g)
      if (!table->is_x(g) && t.exponents[g] < 0)
        throw LaurentViolation("x" + std::to_string(i + 1) + " at " + word_to_string(w) + " has negative " +
                               table->name(g) + "-exponent");
  return *std::move(poly);
}

/// Y^t_i as a subtraction-free rational function of y, z.
inline SfRational y_function(const UniversalPattern& pattern, const MutationWord& w, int i) {
  detail::check_direction(i, pattern.rank());
  return pattern.seed_at(w)->y()[i];
}

/// Definition route: c_ij = exponent of y_i in the tropical y^t_j.
inline IntMatrix c_matrix(const PrincipalPattern& pattern, const MutationWord& w) {
  const auto seed = pattern.seed_at(w);
  const auto& table = pattern.table();
  const int n = pattern.rank();
  IntMatrix c(n, n);
  for (int j = 0; j < n; ++j) {
    const auto& y = seed->y()[j];
    if (y.involves_z())
      throw ZLeakage("y" + std::to_string(j + 1) + " at " + word_to_string(w) + " involves z: " + y.to_string());
    for (int i = 0; i < n; ++i) c(i, j) = y.exponents()[table->y(i)];
  }
  return c;
}

template <SemifieldInstance S>
IntMatrix c_matrix_rec(const Pattern<S>& pattern, const MutationWord& w) {
  return pattern.recurrence_at(w)->C;
}

/// Grading route: column j is the degree of X^t_j.
inline IntMatrix g_matrix(const PrincipalPattern& pattern, const MutationWord& w) {
  const Grading grading(pattern.table(), pattern.initial_B());
  const int n = pattern.rank();
  IntMatrix g(n, n);
  for (int j = 0; j < n; ++j) {
    const auto deg = poly_degree(x_function(pattern, w, j), grading);
    for (int i = 0; i < n; ++i) g(i, j) = deg[i];
  }
  return g;
}

template <SemifieldInstance S>
IntMatrix g_matrix_rec(const Pattern<S>& pattern, const MutationWord& w) {
  return pattern.recurrence_at(w)->G;
}

/// Specialization route: F^t_i = X^t_i at x = 1.
inline std::vector<LaurentPoly> f_polynomials(const PrincipalPattern& pattern, const MutationWord& w) {
  const auto& table = pattern.table();
  std::vector<bool> mask(table->size(), false);
  for (int i = 0; i < table->rank(); ++i) mask[table->x(i)] = true;
  std::vector<LaurentPoly> out;
  for (int i = 0; i < pattern.rank(); ++i) out.push_back(specialize_to_one(x_function(pattern, w, i), mask));
  return out;
}

template <SemifieldInstance S>
std::vector<LaurentPoly> f_polynomials_rec(const Pattern<S>& pattern, const MutationWord& w) {
  return pattern.recurrence_at(w)->F;
}

/// Recurrence data along w with an explicit sign, bypassing the memo.
inline PrincipalData recurrence_along(const TablePtr& table, const IntMatrix& b0, const MutationWord& w, int eps) {
  PrincipalData cur = principal_initial(table, b0);
  for (int k : reduce_word(w)) cur = principal_step(cur, b0, table, k, eps);
  return cur;
}

/// c~_ij = d_i^{-1} c_ij d_j; throws NonInteger on a fractional entry.
inline IntMatrix tilde_c(const IntMatrix& c, const std::vector<int>& d) {
  RationalMatrix r(c);
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) r(i, j) = r(i, j) * d.at(j) / d.at(i);
  return r.to_integer();
}

/// g~_ij = d_i g_ij d_j^{-1}; throws NonInteger on a fractional entry.
inline IntMatrix tilde_g(const IntMatrix& g, const std::vector<int>& d) {
  RationalMatrix r(g);
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) r(i, j) = r(i, j) * d.at(i) / d.at(j);
  return r.to_integer();
}

}  // namespace gencluster
