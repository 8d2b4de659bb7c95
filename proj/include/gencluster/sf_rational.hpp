#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gencluster/errors.hpp"
#include "gencluster/poly.hpp"
#include "gencluster/tropical.hpp"

namespace gencluster {

namespace detail {

/// Polynomial factor of an SfRational. Always primitive (integer content 1),
/// with positive leading coefficient, no monomial content and at least two terms.
struct Atom {
  explicit Atom(LaurentPoly p) : poly(std::move(p)) {
    hash = poly.hash();
    max_exp = poly.max_exponents();
    positive = poly.has_positive_coefficients();
    for (const auto& t : poly.terms()) {
      sum_at_one += t.coefficient;
      sum_at_minus_one += (t.exponents.total_degree() % 2 == 0) ? t.coefficient : Integer(-t.coefficient);
      max_total = std::max(max_total, t.exponents.total_degree());
    }
  }

  LaurentPoly poly;
  std::size_t hash = 0;
  ExponentVector max_exp;
  Integer sum_at_one = 0;
  Integer sum_at_minus_one = 0;
  std::int64_t max_total = 0;
  bool positive = false;
};

using AtomPtr = std::shared_ptr<const Atom>;

inline bool atom_equal(const AtomPtr& a, const AtomPtr& b) {
  return a == b || (a->hash == b->hash && a->poly.terms() == b->poly.terms());
}

inline bool poly_terms_less(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.term_count() != b.term_count()) return a.term_count() < b.term_count();
  for (std::size_t i = 0; i < a.term_count(); ++i) {
    const Term& ta = a.terms()[i];
    const Term& tb = b.terms()[i];
    if (!(ta.exponents == tb.exponents)) return grlex_less(ta.exponents, tb.exponents);
    if (ta.coefficient != tb.coefficient) return ta.coefficient < tb.coefficient;
  }
  return false;
}

/// Total order on atoms used to keep factor lists canonical.
inline bool atom_less(const AtomPtr& a, const AtomPtr& b) {
  if (atom_equal(a, b)) return false;
  if (a->hash != b->hash) return a->hash < b->hash;
  return poly_terms_less(a->poly, b->poly);
}

struct PairHash {
  std::size_t operator()(const std::pair<std::size_t, std::size_t>& p) const {
    return p.first * 0x9e3779b97f4a7c15ull ^ p.second;
  }
};

/// Remembers (dividend, divisor) hash pairs already known not to divide.
inline std::unordered_set<std::pair<std::size_t, std::size_t>, PairHash>& non_divisible_cache() {
  thread_local std::unordered_set<std::pair<std::size_t, std::size_t>, PairHash> cache;
  if (cache.size() > 1'000'000) cache.clear();
  return cache;
}

/// Quotient p / q if q divides p with a subtraction-free quotient. Cheap
/// necessary conditions (degree bounds, values at 1 and -1) are tested first.
inline std::optional<LaurentPoly> divide_atoms(const Atom& p, const Atom& q) {
  if (!p.positive || !q.positive) return std::nullopt;
  if (q.poly.term_count() > p.poly.term_count() || q.max_total > p.max_total) return std::nullopt;
  for (std::size_t i = 0; i < q.max_exp.size(); ++i)
    if (q.max_exp[i] > p.max_exp[i]) return std::nullopt;
  if (p.sum_at_one % q.sum_at_one != 0) return std::nullopt;
  if (q.sum_at_minus_one == 0 ? p.sum_at_minus_one != 0 : p.sum_at_minus_one % q.sum_at_minus_one != 0)
    return std::nullopt;
  auto& cache = non_divisible_cache();
  const auto key = std::make_pair(p.hash, q.hash);
  if (cache.contains(key)) return std::nullopt;
  auto quotient = try_exact_div(p.poly, q.poly);
  if (!quotient || !quotient->has_positive_coefficients()) {
    cache.insert(key);
    return std::nullopt;
  }
  return quotient;
}

}  // namespace detail

/// Element of the universal semifield Q_sf(y, z), or of the ambient field
/// Q_sf(y, z)(x) when x-generators occur.
///
/// Stored in factored form: c * x^m * prod_k A_k^{e_k} with a reduced rational
/// constant c, a Laurent monomial m and polynomial atoms A_k. Arithmetic
/// strips common monomial and integer content and cancels atoms that divide
/// each other exactly, which keeps mutation results from growing without bound.
/// numerator()/denominator() expand the positive and negative parts.
class SfRational {
 public:
  using Factor = std::pair<detail::AtomPtr, int>;

  SfRational() = default;

  static SfRational zero(TablePtr table) {
    SfRational r(std::move(table));
    r.cnum_ = 0;
    return r;
  }
  static SfRational one(TablePtr table) { return SfRational(std::move(table)); }
  static SfRational constant(TablePtr table, const Integer& num, const Integer& den = 1) {
    if (den == 0) throw DivisionByZero();
    SfRational r(std::move(table));
    r.cnum_ = num;
    r.cden_ = den;
    r.normalize_constant();
    return r;
  }
  static SfRational monomial(TablePtr table, ExponentVector e) {
    SfRational r(std::move(table));
    if (e.size() != r.table_->size()) throw Error("exponent vector does not match the table");
    r.mono_ = std::move(e);
    return r;
  }
  static SfRational generator(TablePtr table, std::size_t idx, std::int32_t power = 1) {
    ExponentVector e(table->size());
    e[idx] = power;
    return monomial(std::move(table), std::move(e));
  }
  static SfRational embed(const TropElement& t) { return monomial(t.table(), t.exponents()); }

  static SfRational from_poly(const LaurentPoly& p) { return from_poly_refined(p, {}); }

  static SfRational from_fraction(const LaurentPoly& num, const LaurentPoly& den) {
    if (den.is_zero()) throw DivisionByZero();
    return from_poly(num) / from_poly(den);
  }

  const TablePtr& table() const { return table_; }
  bool is_zero() const { return cnum_ == 0; }
  bool is_one() const { return cnum_ == 1 && cden_ == 1 && mono_.is_zero() && factors_.empty(); }
  /// c * x^m with no polynomial factors.
  bool is_monomial() const { return factors_.empty(); }
  const Integer& constant_numerator() const { return cnum_; }
  const Integer& constant_denominator() const { return cden_; }
  const ExponentVector& monomial_part() const { return mono_; }
  const std::vector<Factor>& factors() const { return factors_; }

  bool is_subtraction_free() const {
    return cnum_ > 0 && std::all_of(factors_.begin(), factors_.end(),
                                    [](const Factor& f) { return f.first->positive; });
  }

  bool involves(std::size_t idx) const {
    if (mono_[idx] != 0) return true;
    return std::any_of(factors_.begin(), factors_.end(),
                       [&](const Factor& f) { return f.first->poly.involves(idx); });
  }

  bool involves_x() const {
    for (int i = 0; i < table_->rank(); ++i)
      if (involves(table_->x(i))) return true;
    return false;
  }

  /// Expanded numerator c_num * x^{m+} * prod_{e>0} A^e.
  LaurentPoly numerator() const { return expand(cnum_, mono_.positive(), +1); }
  /// Expanded denominator c_den * x^{m-} * prod_{e<0} A^{-e}.
  LaurentPoly denominator() const { return expand(cden_, mono_.negative(), -1); }

  /// The element as a Laurent polynomial, if the denominator divides exactly.
  std::optional<LaurentPoly> as_laurent_poly() const {
    if (is_zero()) return LaurentPoly::zero(table_);
    const bool has_negative =
        std::any_of(factors_.begin(), factors_.end(), [](const Factor& f) { return f.second < 0; });
    LaurentPoly num = expand(cnum_, mono_, +1);
    if (!has_negative) return try_exact_div(num, LaurentPoly::constant(table_, cden_));
    return try_exact_div(num, expand(cden_, ExponentVector(table_->size()), -1));
  }

  SfRational inverse() const {
    if (is_zero()) throw DivisionByZero();
    SfRational r = *this;
    std::swap(r.cnum_, r.cden_);
    if (r.cden_ < 0) {
      r.cden_ = -r.cden_;
      r.cnum_ = -r.cnum_;
    }
    r.mono_ = -r.mono_;
    for (auto& f : r.factors_) f.second = -f.second;
    return r;
  }

  friend SfRational operator*(const SfRational& a, const SfRational& b) { return multiply(a, b, +1); }
  friend SfRational operator/(const SfRational& a, const SfRational& b) { return multiply(a, b, -1); }
  friend SfRational operator+(const SfRational& a, const SfRational& b) { return add(a, b); }
  /// In the universal semifield the auxiliary addition is the ordinary one.
  friend SfRational oplus(const SfRational& a, const SfRational& b) { return add(a, b); }

  friend SfRational pow(const SfRational& a, std::int64_t k) {
    if (k == 0) return one(a.table_);
    if (a.is_zero()) {
      if (k < 0) throw DivisionByZero();
      return a;
    }
    SfRational base = k < 0 ? a.inverse() : a;
    const auto e = static_cast<unsigned>(k < 0 ? -k : k);
    SfRational r = base;
    r.cnum_ = integer_pow(base.cnum_, e);
    r.cden_ = integer_pow(base.cden_, e);
    r.mono_ = base.mono_ * static_cast<std::int64_t>(e);
    for (auto& f : r.factors_) f.second *= static_cast<int>(e);
    return r;
  }

  /// Exact equality by cross-multiplication: a == b iff num(a/b) == den(a/b).
  friend bool operator==(const SfRational& a, const SfRational& b) {
    if (!same_table(a.table_, b.table_)) throw TableMismatch();
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    const SfRational q = a / b;
    if (q.is_one()) return true;
    return q.numerator() == q.denominator();
  }

  /// The unique r with r^k = *this when every exponent is divisible by k and
  /// the constants are perfect k-th powers; nullopt otherwise (undecided).
  std::optional<SfRational> root(int k) const {
    if (k <= 0) throw InputError("root order must be positive");
    if (is_zero()) return *this;
    SfRational r = *this;
    for (std::size_t i = 0; i < mono_.size(); ++i) {
      if (mono_[i] % k != 0) return std::nullopt;
      r.mono_[i] = mono_[i] / k;
    }
    for (auto& f : r.factors_) {
      if (f.second % k != 0) return std::nullopt;
      f.second /= k;
    }
    const bool negative = cnum_ < 0;
    if (negative && k % 2 == 0) return std::nullopt;
    auto num = integer_root(negative ? Integer(-cnum_) : cnum_, static_cast<unsigned>(k));
    auto den = integer_root(cden_, static_cast<unsigned>(k));
    if (!num || !den) return std::nullopt;
    r.cnum_ = negative ? Integer(-*num) : *num;
    r.cden_ = *den;
    return r;
  }

  /// Tropical evaluation (semifield homomorphism Q_sf(y,z) -> Trop(y,z)).
  TropElement to_trop() const {
    if (is_zero()) throw DivisionByZero();
    if (involves_x()) throw InputError("tropical evaluation of an element involving x-generators");
    if (!is_subtraction_free()) throw InputError("tropical evaluation needs a subtraction-free element");
    // Atoms carry no monomial content, so their tropical value is 1.
    return TropElement(table_, mono_);
  }

  /// Factored human-readable form, e.g. "y1^-2*y2^-1*(1 + 2*y2 + y2^2)".
  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    auto append = [&](const std::string& s) {
      if (!out.empty()) out += "*";
      out += s;
    };
    if (cnum_ != 1 || cden_ != 1 || (mono_.is_zero() && factors_.empty())) {
      append(cden_ == 1 ? cnum_.str() : cnum_.str() + "/" + cden_.str());
    }
    std::string mono = LaurentPoly::monomial(table_, mono_).monomial_string(mono_);
    if (!mono.empty()) append(mono);
    for (const auto& [atom, e] : factors_) {
      std::string s = "(" + atom->poly.to_string() + ")";
      if (e != 1) s += "^" + std::to_string(e);
      append(s);
    }
    return out;
  }

 private:
  explicit SfRational(TablePtr table) : table_(std::move(table)), mono_(table_->size()) {}

  void normalize_constant() {
    if (cden_ < 0) {
      cden_ = -cden_;
      cnum_ = -cnum_;
    }
    if (cnum_ == 0) {
      cden_ = 1;
      mono_ = ExponentVector(table_->size());
      factors_.clear();
      return;
    }
    Integer g = integer_gcd(cnum_, cden_);
    if (g != 1) {
      cnum_ /= g;
      cden_ /= g;
    }
  }

  LaurentPoly expand(const Integer& c, const ExponentVector& m, int sign) const {
    LaurentPoly r = LaurentPoly::monomial(table_, m, c);
    for (const auto& [atom, e] : factors_) {
      if (e * sign > 0) r = r * poly_pow(atom->poly, static_cast<unsigned>(e * sign));
    }
    return r;
  }

  static void add_factor(std::vector<Factor>& list, const detail::AtomPtr& atom, int e) {
    if (e == 0) return;
    auto it = std::lower_bound(list.begin(), list.end(), atom,
                               [](const Factor& f, const detail::AtomPtr& a) { return detail::atom_less(f.first, a); });
    if (it != list.end() && detail::atom_equal(it->first, atom)) {
      it->second += e;
      if (it->second == 0) list.erase(it);
    } else {
      list.insert(it, {atom, e});
    }
  }

  /// Splits a primitive, content-free polynomial by the candidate atoms and
  /// records the pieces with exponent e.
  static void add_poly_factor(std::vector<Factor>& list, LaurentPoly p, int e,
                              const std::vector<detail::AtomPtr>& candidates) {
    if (p.is_one()) return;
    auto atom = std::make_shared<const detail::Atom>(std::move(p));
    for (const auto& cand : candidates) {
      if (detail::atom_equal(atom, cand)) {
        add_factor(list, cand, e);
        return;
      }
      while (true) {
        auto q = detail::divide_atoms(*atom, *cand);
        if (!q) break;
        add_factor(list, cand, e);
        if (q->is_one()) return;
        atom = std::make_shared<const detail::Atom>(std::move(*q));
        if (detail::atom_equal(atom, cand)) {
          add_factor(list, cand, e);
          return;
        }
      }
    }
    add_factor(list, atom, e);
  }

  static SfRational from_poly_refined(const LaurentPoly& p, const std::vector<detail::AtomPtr>& candidates) {
    if (p.is_zero()) return zero(p.table());
    SfRational r(p.table());
    ExponentVector m = p.min_exponents();
    Integer c = p.content();
    LaurentPoly primitive = p.divided_by_monomial(c, m);
    r.cnum_ = c;
    r.mono_ = std::move(m);
    add_poly_factor(r.factors_, std::move(primitive), 1, candidates);
    return r;
  }

  /// Cancels atoms of opposite sign that divide one another.
  void refine_opposite() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < factors_.size() && !changed; ++i) {
        for (std::size_t j = 0; j < factors_.size() && !changed; ++j) {
          if (i == j || factors_[i].second * factors_[j].second >= 0) continue;
          // Try factors_[j] | factors_[i].
          auto q = detail::divide_atoms(*factors_[i].first, *factors_[j].first);
          if (!q) continue;
          const auto big = factors_[i];
          const auto small = factors_[j].first;
          std::vector<Factor> next = factors_;
          next.erase(next.begin() + static_cast<std::ptrdiff_t>(i));
          add_factor(next, small, big.second);
          add_poly_factor(next, std::move(*q), big.second, {small});
          factors_ = std::move(next);
          changed = true;
        }
      }
    }
  }

  static SfRational multiply(const SfRational& a, const SfRational& b, int sign) {
    if (!same_table(a.table_, b.table_)) throw TableMismatch();
    if (sign < 0 && b.is_zero()) throw DivisionByZero();
    if (a.is_zero() || b.is_zero()) return zero(a.table_);
    SfRational r(a.table_);
    r.cnum_ = a.cnum_ * (sign > 0 ? b.cnum_ : b.cden_);
    r.cden_ = a.cden_ * (sign > 0 ? b.cden_ : b.cnum_);
    r.normalize_constant();
    r.mono_ = sign > 0 ? a.mono_ + b.mono_ : a.mono_ - b.mono_;
    r.factors_ = a.factors_;
    bool opposite = false;
    for (const auto& [atom, e] : b.factors_) {
      for (const auto& f : a.factors_)
        if (f.second * e * sign < 0) opposite = true;
      add_factor(r.factors_, atom, e * sign);
    }
    if (opposite) r.refine_opposite();
    return r;
  }

  static SfRational add(const SfRational& a, const SfRational& b) {
    if (!same_table(a.table_, b.table_)) throw TableMismatch();
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    // Pull out the common part g = x^min(m_a, m_b) * prod A^min(e_a, e_b), then
    // a + b = g * (a/g + b/g) with both quotients polynomial.
    std::vector<Factor> common;
    std::vector<detail::AtomPtr> candidates;
    auto exponent_in = [](const std::vector<Factor>& list, const detail::AtomPtr& atom) {
      for (const auto& f : list)
        if (detail::atom_equal(f.first, atom)) return f.second;
      return 0;
    };
    for (const auto* side : {&a.factors_, &b.factors_}) {
      for (const auto& [atom, e] : *side) {
        if (std::any_of(candidates.begin(), candidates.end(),
                        [&](const detail::AtomPtr& c) { return detail::atom_equal(c, atom); }))
          continue;
        candidates.push_back(atom);
        const int m = std::min(exponent_in(a.factors_, atom), exponent_in(b.factors_, atom));
        if (m != 0) common.push_back({atom, m});
      }
    }
    std::sort(common.begin(), common.end(),
              [](const Factor& x, const Factor& y) { return detail::atom_less(x.first, y.first); });
    const ExponentVector gmono = ExponentVector::min(a.mono_, b.mono_);
    const Integer lcm = a.cden_ / integer_gcd(a.cden_, b.cden_) * b.cden_;

    auto cofactor = [&](const SfRational& s) {
      LaurentPoly r = LaurentPoly::monomial(s.table_, s.mono_ - gmono, s.cnum_ * (lcm / s.cden_));
      for (const auto& cand : candidates) {
        const int e = exponent_in(s.factors_, cand) - exponent_in(common, cand);
        if (e > 0) r = r * poly_pow(cand->poly, static_cast<unsigned>(e));
      }
      return r;
    };
    LaurentPoly sum = cofactor(a) + cofactor(b);
    if (sum.is_zero()) return zero(a.table_);

    SfRational r = from_poly_refined(sum, candidates);
    r.mono_ += gmono;
    r.cden_ = lcm;
    r.normalize_constant();
    for (const auto& [atom, e] : common) add_factor(r.factors_, atom, e);
    if (!r.factors_.empty()) r.refine_opposite();
    return r;
  }

  TablePtr table_;
  Integer cnum_ = 1;
  Integer cden_ = 1;
  ExponentVector mono_;
  std::vector<Factor> factors_;
};

inline SfRational sf_add(const SfRational& a, const SfRational& b) { return a + b; }
inline SfRational sf_mul(const SfRational& a, const SfRational& b) { return a * b; }
inline SfRational sf_div(const SfRational& a, const SfRational& b) { return a / b; }
inline bool sf_equal(const SfRational& a, const SfRational& b) { return a == b; }
inline TropElement sf_to_trop(const SfRational& a) { return a.to_trop(); }

/// Images of generators under a substitution; nullopt leaves a generator fixed.
using Substitution = std::vector<std::optional<SfRational>>;

/// Homomorphic image of p under a generator substitution.
inline SfRational poly_substitute(const LaurentPoly& p, const Substitution& sigma) {
  const TablePtr& table = p.table();
  if (sigma.size() != table->size()) throw SubstitutionError("substitution size does not match the table");
  std::vector<SfRational> images;
  images.reserve(table->size());
  bool monomial_images = true;
  for (std::size_t g = 0; g < table->size(); ++g) {
    const bool used = p.involves(g);
    if (sigma[g]) {
      if (!same_table(sigma[g]->table(), table)) throw TableMismatch();
      images.push_back(*sigma[g]);
    } else {
      images.push_back(SfRational::generator(table, g));
    }
    if (!used) continue;
    const SfRational& img = images.back();
    if (img.is_zero()) {
      for (const auto& t : p.terms())
        if (t.exponents[g] < 0)
          throw SubstitutionError("zero substituted into negatively exponentiated " + table->name(g));
    }
    if (!img.is_monomial() || img.constant_denominator() != 1 ||
        (img.constant_numerator() != 1 && !std::all_of(p.terms().begin(), p.terms().end(),
                                                       [&](const Term& t) { return t.exponents[g] >= 0; })))
      monomial_images = false;
  }
  if (p.is_zero()) return SfRational::zero(table);

  if (monomial_images) {
    // Every image is c * x^m with integer c: the result is again a polynomial.
    std::vector<Term> terms;
    terms.reserve(p.term_count());
    for (const auto& t : p.terms()) {
      Term u{ExponentVector(table->size()), t.coefficient};
      for (std::size_t g = 0; g < table->size(); ++g) {
        const auto e = t.exponents[g];
        if (e == 0) continue;
        u.exponents += images[g].monomial_part() * e;
        if (images[g].constant_numerator() != 1) {
          if (images[g].is_zero()) {
            u.coefficient = 0;
            break;
          }
          u.coefficient *= integer_pow(images[g].constant_numerator(), static_cast<unsigned>(e));
        }
      }
      terms.push_back(std::move(u));
    }
    return SfRational::from_poly(LaurentPoly::from_terms(table, std::move(terms)));
  }

  SfRational result = SfRational::zero(table);
  for (const auto& t : p.terms()) {
    SfRational value = SfRational::constant(table, t.coefficient);
    for (std::size_t g = 0; g < table->size(); ++g)
      if (t.exponents[g] != 0) value = value * pow(images[g], t.exponents[g]);
    result = result + value;
  }
  return result;
}

}  // namespace gencluster
