#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "gencluster/errors.hpp"
#include "gencluster/integer.hpp"
#include "gencluster/matrix.hpp"
#include "gencluster/variable_table.hpp"

namespace gencluster {

/// Exponents of a Laurent monomial, one slot per generator of the table.
class ExponentVector {
 public:
  ExponentVector() = default;
  explicit ExponentVector(std::size_t size) : e_(size, 0) {}

  std::size_t size() const { return e_.size(); }
  std::int32_t operator[](std::size_t i) const { return e_[i]; }
  std::int32_t& operator[](std::size_t i) { return e_[i]; }

  bool is_zero() const {
    return std::all_of(e_.begin(), e_.end(), [](std::int32_t v) { return v == 0; });
  }
  bool is_nonnegative() const {
    return std::all_of(e_.begin(), e_.end(), [](std::int32_t v) { return v >= 0; });
  }
  std::int64_t total_degree() const {
    std::int64_t s = 0;
    for (auto v : e_) s += v;
    return s;
  }

  ExponentVector& operator+=(const ExponentVector& o) {
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    return *this;
  }
  ExponentVector& operator-=(const ExponentVector& o) {
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
    return *this;
  }
  friend ExponentVector operator+(ExponentVector a, const ExponentVector& b) { return a += b; }
  friend ExponentVector operator-(ExponentVector a, const ExponentVector& b) { return a -= b; }
  friend ExponentVector operator*(ExponentVector a, std::int64_t k) {
    for (auto& v : a.e_) v = static_cast<std::int32_t>(v * k);
    return a;
  }
  ExponentVector operator-() const { return *this * -1; }

  static ExponentVector min(const ExponentVector& a, const ExponentVector& b) {
    ExponentVector r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.e_[i] = std::min(a.e_[i], b.e_[i]);
    return r;
  }
  static ExponentVector max(const ExponentVector& a, const ExponentVector& b) {
    ExponentVector r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.e_[i] = std::max(a.e_[i], b.e_[i]);
    return r;
  }

  /// Nonnegative / nonpositive parts: e = positive() - negative().
  ExponentVector positive() const {
    ExponentVector r = *this;
    for (auto& v : r.e_) v = v > 0 ? v : 0;
    return r;
  }
  ExponentVector negative() const {
    ExponentVector r = *this;
    for (auto& v : r.e_) v = v < 0 ? -v : 0;
    return r;
  }

  friend bool operator==(const ExponentVector& a, const ExponentVector& b) { return a.e_ == b.e_; }

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (auto v : e_) h = (h ^ static_cast<std::size_t>(static_cast<std::uint32_t>(v))) * 0x100000001b3ull;
    return h;
  }

 private:
  boost::container::small_vector<std::int32_t, 12> e_;
};

struct ExponentHash {
  std::size_t operator()(const ExponentVector& e) const { return e.hash(); }
};

/// Graded lexicographic order: total degree first, then the earliest generator wins.
/// Compatible with multiplication of Laurent monomials.
inline bool grlex_less(const ExponentVector& a, const ExponentVector& b) {
  const auto da = a.total_degree();
  const auto db = b.total_degree();
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

struct GrlexLess {
  bool operator()(const ExponentVector& a, const ExponentVector& b) const { return grlex_less(a, b); }
};

struct Term {
  ExponentVector exponents;
  Integer coefficient;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse integer Laurent polynomial over a VariableTable. Terms are kept in
/// ascending graded-lex order with no zero coefficients, so the term list is a
/// canonical form and equality is a plain comparison.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(TablePtr table) : table_(std::move(table)) {}

  static LaurentPoly zero(TablePtr table) { return LaurentPoly(std::move(table)); }
  static LaurentPoly constant(TablePtr table, Integer c) {
    LaurentPoly p(table);
    if (c != 0) p.terms_.push_back({ExponentVector(p.table_->size()), std::move(c)});
    return p;
  }
  static LaurentPoly one(TablePtr table) { return constant(std::move(table), 1); }
  static LaurentPoly monomial(TablePtr table, ExponentVector e, Integer c = 1) {
    LaurentPoly p(std::move(table));
    if (e.size() != p.table_->size()) throw Error("exponent vector does not match the table");
    if (c != 0) p.terms_.push_back({std::move(e), std::move(c)});
    return p;
  }
  static LaurentPoly generator(TablePtr table, std::size_t idx, std::int32_t power = 1) {
    ExponentVector e(table->size());
    e[idx] = power;
    return monomial(std::move(table), std::move(e));
  }
  /// Builds from arbitrary (possibly repeated, possibly zero) terms.
  static LaurentPoly from_terms(TablePtr table, std::vector<Term> terms) {
    LaurentPoly p(std::move(table));
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return grlex_less(a.exponents, b.exponents); });
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().exponents == t.exponents) {
        p.terms_.back().coefficient += t.coefficient;
      } else {
        p.terms_.push_back(std::move(t));
      }
    }
    std::erase_if(p.terms_, [](const Term& t) { return t.coefficient == 0; });
    return p;
  }

  const TablePtr& table() const { return table_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exponents.is_zero()); }
  bool is_one() const { return is_constant() && !terms_.empty() && terms_[0].coefficient == 1; }
  const Term& leading() const { return terms_.back(); }
  const Term& trailing() const { return terms_.front(); }

  bool has_positive_coefficients() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coefficient > 0; });
  }

  /// Coefficient of the monomial with all-zero exponents.
  Integer constant_term() const {
    for (const auto& t : terms_)
      if (t.exponents.is_zero()) return t.coefficient;
    return 0;
  }

  Integer coefficient(const ExponentVector& e) const {
    for (const auto& t : terms_)
      if (t.exponents == e) return t.coefficient;
    return 0;
  }

  /// Componentwise minimum exponent over all terms (the tropical value of a positive polynomial).
  ExponentVector min_exponents() const {
    if (terms_.empty()) return ExponentVector(table_->size());
    ExponentVector m = terms_[0].exponents;
    for (const auto& t : terms_) m = ExponentVector::min(m, t.exponents);
    return m;
  }
  ExponentVector max_exponents() const {
    if (terms_.empty()) return ExponentVector(table_->size());
    ExponentVector m = terms_[0].exponents;
    for (const auto& t : terms_) m = ExponentVector::max(m, t.exponents);
    return m;
  }

  /// gcd of all coefficients, carrying the sign of the leading coefficient.
  Integer content() const {
    Integer g = 0;
    for (const auto& t : terms_) g = integer_gcd(g, t.coefficient);
    if (!terms_.empty() && leading().coefficient < 0) g = -g;
    return g;
  }

  bool involves(std::size_t idx) const {
    return std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.exponents[idx] != 0; });
  }

  LaurentPoly operator-() const {
    LaurentPoly r = *this;
    for (auto& t : r.terms_) t.coefficient = -t.coefficient;
    return r;
  }

  /// Multiplies by c * x^e. Order is preserved because grlex is multiplicative.
  LaurentPoly scaled(const Integer& c, const ExponentVector& e) const {
    if (c == 0) return zero(table_);
    LaurentPoly r = *this;
    for (auto& t : r.terms_) {
      t.exponents += e;
      t.coefficient *= c;
    }
    return r;
  }

  /// Divides every coefficient by c (must be exact) and shifts by x^{-e}.
  LaurentPoly divided_by_monomial(const Integer& c, const ExponentVector& e) const {
    if (c == 0) throw DivisionByZero();
    LaurentPoly r = *this;
    for (auto& t : r.terms_) {
      Integer q, rem;
      boost::multiprecision::divide_qr(t.coefficient, c, q, rem);
      if (rem != 0) throw NonDivisible("coefficient not divisible by monomial coefficient");
      t.coefficient = std::move(q);
      t.exponents -= e;
    }
    return r;
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return same_table(a.table_, b.table_) && a.terms_ == b.terms_;
  }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ull;
    for (const auto& t : terms_) {
      h = (h ^ t.exponents.hash()) * 1099511628211ull;
      h = (h ^ std::hash<Integer>{}(t.coefficient)) * 1099511628211ull;
    }
    return h;
  }

  /// Human-readable form in ascending term order, e.g. "1 + z_1_1*y1 + y1^2".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
      Integer c = t.coefficient;
      if (first) {
        if (c < 0) {
          os << "-";
          c = -c;
        }
      } else {
        os << (c < 0 ? " - " : " + ");
        if (c < 0) c = -c;
      }
      first = false;
      std::string mono = monomial_string(t.exponents);
      if (mono.empty()) {
        os << c;
      } else if (c == 1) {
        os << mono;
      } else {
        os << c << "*" << mono;
      }
    }
    return os.str();
  }

  std::string monomial_string(const ExponentVector& e) const {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!out.empty()) out += "*";
      out += table_->name(i);
      if (e[i] != 1) out += "^" + std::to_string(e[i]);
    }
    return out;
  }

 private:
  friend LaurentPoly poly_add(const LaurentPoly&, const LaurentPoly&);
  friend LaurentPoly poly_mul(const LaurentPoly&, const LaurentPoly&);
  friend std::optional<LaurentPoly> try_exact_div(const LaurentPoly&, const LaurentPoly&);

  TablePtr table_;
  std::vector<Term> terms_;
};

inline void require_same_table(const LaurentPoly& a, const LaurentPoly& b) {
  if (!same_table(a.table(), b.table())) throw TableMismatch();
}

inline LaurentPoly poly_add(const LaurentPoly& a, const LaurentPoly& b) {
  require_same_table(a, b);
  LaurentPoly r(a.table_);
  r.terms_.reserve(a.terms_.size() + b.terms_.size());
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  while (ia != a.terms_.end() || ib != b.terms_.end()) {
    if (ib == b.terms_.end() || (ia != a.terms_.end() && grlex_less(ia->exponents, ib->exponents))) {
      r.terms_.push_back(*ia++);
    } else if (ia == a.terms_.end() || grlex_less(ib->exponents, ia->exponents)) {
      r.terms_.push_back(*ib++);
    } else {
      Integer c = ia->coefficient + ib->coefficient;
      if (c != 0) r.terms_.push_back({ia->exponents, std::move(c)});
      ++ia;
      ++ib;
    }
  }
  return r;
}

namespace detail {

/// Multiplication with exponents packed into one 64-bit key. Small coefficients
/// accumulate in 128-bit integers, larger ones in Integer. Returns nullopt when
/// the exponent ranges do not fit the packing.
inline std::optional<LaurentPoly> packed_mul(const LaurentPoly& a, const LaurentPoly& b) {
  const ExponentVector lo_a = a.min_exponents(), lo_b = b.min_exponents();
  const ExponentVector hi_a = a.max_exponents(), hi_b = b.max_exponents();
  const std::size_t nv = lo_a.size();
  std::vector<std::uint64_t> stride(nv);
  unsigned __int128 range = 1;
  for (std::size_t i = 0; i < nv; ++i) {
    stride[i] = static_cast<std::uint64_t>(range);
    range *= static_cast<unsigned __int128>(hi_a[i] - lo_a[i]) + (hi_b[i] - lo_b[i]) + 1;
    if (range > (static_cast<unsigned __int128>(1) << 62)) return std::nullopt;
  }
  const auto pack = [&](const LaurentPoly& p, const ExponentVector& lo) {
    std::vector<std::uint64_t> keys;
    keys.reserve(p.terms().size());
    for (const auto& t : p.terms()) {
      std::uint64_t k = 0;
      for (std::size_t i = 0; i < nv; ++i) k += static_cast<std::uint64_t>(t.exponents[i] - lo[i]) * stride[i];
      keys.push_back(k);
    }
    return keys;
  };
  const auto ka = pack(a, lo_a), kb = pack(b, lo_b);
  const auto unpack = [&](std::uint64_t key) {
    ExponentVector e(nv);
    for (std::size_t i = nv; i-- > 0;) {
      e[i] = static_cast<std::int32_t>(key / stride[i]) + lo_a[i] + lo_b[i];
      key %= stride[i];
    }
    return e;
  };

  constexpr std::int64_t coeff_limit = std::int64_t{1} << 40;
  const auto fits = [&](const LaurentPoly& p, std::vector<std::int64_t>& out) {
    out.reserve(p.terms().size());
    for (const auto& t : p.terms()) {
      if (t.coefficient >= coeff_limit || t.coefficient <= -coeff_limit) return false;
      out.push_back(static_cast<std::int64_t>(t.coefficient));
    }
    return true;
  };
  std::vector<std::int64_t> ca, cb;
  std::vector<Term> terms;
  if (!fits(a, ca) || !fits(b, cb)) {
    std::unordered_map<std::uint64_t, Integer> acc;
    acc.reserve(ka.size() * kb.size());
    for (std::size_t i = 0; i < ka.size(); ++i)
      for (std::size_t j = 0; j < kb.size(); ++j) acc[ka[i] + kb[j]] += a.terms()[i].coefficient * b.terms()[j].coefficient;
    terms.reserve(acc.size());
    for (auto& [k, c] : acc)
      if (c != 0) terms.push_back({unpack(k), std::move(c)});
    return LaurentPoly::from_terms(a.table(), std::move(terms));
  }

  std::vector<std::pair<std::uint64_t, __int128>> sums;
  const std::size_t products = ka.size() * kb.size();
  const auto total = static_cast<std::uint64_t>(range);
  if (total <= std::max<std::uint64_t>(4 * products, 1u << 16) && total <= (1u << 21)) {
    std::vector<__int128> dense(total, 0);
    std::vector<char> used(total, 0);
    for (std::size_t i = 0; i < ka.size(); ++i)
      for (std::size_t j = 0; j < kb.size(); ++j) {
        const auto k = ka[i] + kb[j];
        dense[k] += static_cast<__int128>(ca[i]) * cb[j];
        used[k] = 1;
      }
    for (std::uint64_t k = 0; k < total; ++k)
      if (used[k] && dense[k] != 0) sums.emplace_back(k, dense[k]);
  } else {
    std::unordered_map<std::uint64_t, __int128> acc;
    acc.reserve(products);
    for (std::size_t i = 0; i < ka.size(); ++i)
      for (std::size_t j = 0; j < kb.size(); ++j) acc[ka[i] + kb[j]] += static_cast<__int128>(ca[i]) * cb[j];
    for (const auto& [k, c] : acc)
      if (c != 0) sums.emplace_back(k, c);
  }

  terms.reserve(sums.size());
  for (const auto& [key, c] : sums) {
    const bool neg = c < 0;
    unsigned __int128 mag = neg ? -static_cast<unsigned __int128>(c) : static_cast<unsigned __int128>(c);
    Integer coef = static_cast<std::uint64_t>(mag >> 64);
    coef <<= 64;
    coef += static_cast<std::uint64_t>(mag);
    if (neg) coef = -coef;
    terms.push_back({unpack(key), std::move(coef)});
  }
  return LaurentPoly::from_terms(a.table(), std::move(terms));
}

}  // namespace detail

inline LaurentPoly poly_mul(const LaurentPoly& a, const LaurentPoly& b) {
  require_same_table(a, b);
  if (a.is_zero() || b.is_zero()) return LaurentPoly::zero(a.table_);
  if (a.is_monomial()) return b.scaled(a.terms_[0].coefficient, a.terms_[0].exponents);
  if (b.is_monomial()) return a.scaled(b.terms_[0].coefficient, b.terms_[0].exponents);
  if (auto fast = detail::packed_mul(a, b)) return std::move(*fast);
  std::unordered_map<ExponentVector, Integer, ExponentHash> acc;
  acc.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) acc[ta.exponents + tb.exponents] += ta.coefficient * tb.coefficient;
  LaurentPoly r(a.table_);
  r.terms_.reserve(acc.size());
  for (auto& [e, c] : acc)
    if (c != 0) r.terms_.push_back({e, std::move(c)});
  std::sort(r.terms_.begin(), r.terms_.end(),
            [](const Term& x, const Term& y) { return grlex_less(x.exponents, y.exponents); });
  return r;
}

inline LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) { return poly_add(a, b); }
inline LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return poly_add(a, -b); }
inline LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) { return poly_mul(a, b); }

inline LaurentPoly poly_pow(const LaurentPoly& p, unsigned exp) {
  LaurentPoly result = LaurentPoly::one(p.table());
  LaurentPoly base = p;
  while (exp != 0) {
    if (exp & 1u) result = result * base;
    exp >>= 1u;
    if (exp != 0) base = base * base;
  }
  return result;
}

/// Exact quotient a / b in the Laurent ring, or nullopt if b does not divide a.
///
/// Leading-term elimination under grlex. Both operands are first shifted by
/// their minimal exponents into the polynomial ring, where grlex is a
/// well-order; a divisor without monomial content divides x^m * A iff it
/// divides A, so the shifted division decides Laurent divisibility.
inline std::optional<LaurentPoly> try_exact_div(const LaurentPoly& a, const LaurentPoly& b) {
  require_same_table(a, b);
  if (b.is_zero()) throw DivisionByZero();
  if (a.is_zero()) return LaurentPoly::zero(a.table_);
  if (b.is_monomial()) {
    const Term& t = b.terms_[0];
    LaurentPoly r = a;
    for (auto& term : r.terms_) {
      Integer q, rem;
      boost::multiprecision::divide_qr(term.coefficient, t.coefficient, q, rem);
      if (rem != 0) return std::nullopt;
      term.coefficient = std::move(q);
      term.exponents -= t.exponents;
    }
    return r;
  }
  if (a.terms_.size() < b.terms_.size()) return std::nullopt;
  const ExponentVector shift_a = a.min_exponents();
  const ExponentVector shift_b = b.min_exponents();
  std::vector<Term> bs = b.terms_;
  for (auto& t : bs) t.exponents -= shift_b;
  const ExponentVector span_a = a.max_exponents() - shift_a;
  const ExponentVector span_b = b.max_exponents() - shift_b;
  for (std::size_t i = 0; i < span_a.size(); ++i)
    if (span_a[i] < span_b[i]) return std::nullopt;
  const Term& lead_b = bs.back();

  std::map<ExponentVector, Integer, GrlexLess> rem;
  for (const auto& t : a.terms_) rem.emplace_hint(rem.end(), t.exponents - shift_a, t.coefficient);
  std::vector<Term> quotient;
  while (!rem.empty()) {
    auto lead = std::prev(rem.end());
    ExponentVector qe = lead->first - lead_b.exponents;
    if (!qe.is_nonnegative()) return std::nullopt;
    Integer qc, r;
    boost::multiprecision::divide_qr(lead->second, lead_b.coefficient, qc, r);
    if (r != 0) return std::nullopt;
    for (const auto& tb : bs) {
      ExponentVector e = tb.exponents + qe;
      auto it = rem.find(e);
      if (it == rem.end()) {
        rem.emplace(std::move(e), -(qc * tb.coefficient));
      } else {
        it->second -= qc * tb.coefficient;
        if (it->second == 0) rem.erase(it);
      }
    }
    quotient.push_back({std::move(qe), std::move(qc)});
  }
  const ExponentVector offset = shift_a - shift_b;
  LaurentPoly q(a.table_);
  q.terms_.reserve(quotient.size());
  for (auto it = quotient.rbegin(); it != quotient.rend(); ++it)
    q.terms_.push_back({it->exponents + offset, std::move(it->coefficient)});
  return q;
}

/// Exact quotient a / b; throws NonDivisible when the remainder is nonzero.
inline LaurentPoly poly_exact_div(const LaurentPoly& a, const LaurentPoly& b) {
  auto q = try_exact_div(a, b);
  if (!q) throw NonDivisible("(" + a.to_string() + ") is not divisible by (" + b.to_string() + ")");
  return *std::move(q);
}

/// Substitutes 1 for every generator selected by `mask`.
inline LaurentPoly specialize_to_one(const LaurentPoly& p, const std::vector<bool>& mask) {
  std::vector<Term> terms;
  terms.reserve(p.term_count());
  for (const auto& t : p.terms()) {
    Term u = t;
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i]) u.exponents[i] = 0;
    terms.push_back(std::move(u));
  }
  return LaurentPoly::from_terms(p.table(), std::move(terms));
}

using DegreeVector = std::vector<std::int64_t>;

/// Z^n-grading on the generators of a table: deg(x_i) = e_i, deg(y_j) = -b_j
/// (j-th column of the initial exchange matrix), deg(z) = 0.
class Grading {
 public:
  Grading(TablePtr table, const IntMatrix& initial_b) : table_(std::move(table)) {
    const int n = table_->rank();
    if (initial_b.rows() != static_cast<std::size_t>(n) || !initial_b.is_square())
      throw InputError("grading matrix has the wrong shape");
    degrees_.assign(table_->size(), DegreeVector(n, 0));
    for (int i = 0; i < n; ++i) degrees_[table_->x(i)][i] = 1;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) degrees_[table_->y(j)][i] = -initial_b(i, j);
  }

  const DegreeVector& of_generator(std::size_t idx) const { return degrees_.at(idx); }

  DegreeVector of_monomial(const ExponentVector& e) const {
    DegreeVector d(table_->rank(), 0);
    for (std::size_t g = 0; g < e.size(); ++g) {
      if (e[g] == 0) continue;
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += static_cast<std::int64_t>(e[g]) * degrees_[g][i];
    }
    return d;
  }

  const TablePtr& table() const { return table_; }

 private:
  TablePtr table_;
  std::vector<DegreeVector> degrees_;
};

/// Common degree of all terms; throws Inhomogeneous if two terms disagree.
inline DegreeVector poly_degree(const LaurentPoly& p, const Grading& grading) {
  if (p.is_zero()) throw Inhomogeneous("the zero polynomial has no degree");
  if (!same_table(p.table(), grading.table())) throw TableMismatch();
  DegreeVector deg = grading.of_monomial(p.terms()[0].exponents);
  for (const auto& t : p.terms()) {
    if (grading.of_monomial(t.exponents) != deg)
      throw Inhomogeneous("terms " + p.monomial_string(p.terms()[0].exponents) + " and " +
                          p.monomial_string(t.exponents) + " have different degrees");
  }
  return deg;
}

}  // namespace gencluster
