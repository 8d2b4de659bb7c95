#pragma once

#include <optional>
#include <string>
#include <utility>

#include "gencluster/errors.hpp"
#include "gencluster/poly.hpp"

namespace gencluster {

/// Element of Trop(y, z): a Laurent monomial in the y- and z-generators with
/// coefficient 1. Multiplication adds exponents, the auxiliary addition takes
/// componentwise minima.
class TropElement {
 public:
  TropElement() = default;
  TropElement(TablePtr table, ExponentVector e) : table_(std::move(table)), e_(std::move(e)) {
    if (e_.size() != table_->size()) throw Error("exponent vector does not match the table");
    for (int i = 0; i < table_->rank(); ++i)
      if (e_[table_->x(i)] != 0) throw InputError("tropical elements cannot involve x-generators");
  }

  static TropElement one(TablePtr table) {
    const auto size = table->size();
    return TropElement(std::move(table), ExponentVector(size));
  }
  static TropElement generator(TablePtr table, std::size_t idx, std::int32_t power = 1) {
    ExponentVector e(table->size());
    e[idx] = power;
    return TropElement(std::move(table), std::move(e));
  }

  const TablePtr& table() const { return table_; }
  const ExponentVector& exponents() const { return e_; }
  bool is_one() const { return e_.is_zero(); }

  /// True when some z-generator carries a nonzero exponent.
  bool involves_z() const {
    for (std::size_t g = 0; g < e_.size(); ++g)
      if (table_->generator(g).kind == GeneratorKind::z && e_[g] != 0) return true;
    return false;
  }

  friend TropElement operator*(const TropElement& a, const TropElement& b) {
    check(a, b);
    return TropElement(a.table_, a.e_ + b.e_, Unchecked{});
  }
  friend TropElement operator/(const TropElement& a, const TropElement& b) {
    check(a, b);
    return TropElement(a.table_, a.e_ - b.e_, Unchecked{});
  }
  TropElement inverse() const { return TropElement(table_, -e_, Unchecked{}); }

  friend TropElement pow(const TropElement& a, std::int64_t k) { return TropElement(a.table_, a.e_ * k, Unchecked{}); }

  /// Tropical sum: componentwise minimum.
  friend TropElement oplus(const TropElement& a, const TropElement& b) {
    check(a, b);
    return TropElement(a.table_, ExponentVector::min(a.e_, b.e_), Unchecked{});
  }

  friend bool operator==(const TropElement& a, const TropElement& b) {
    return same_table(a.table_, b.table_) && a.e_ == b.e_;
  }

  /// The unique r with r^k = *this, if the exponents are divisible by k.
  std::optional<TropElement> root(int k) const {
    if (k <= 0) throw InputError("root order must be positive");
    ExponentVector r = e_;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (e_[i] % k != 0) return std::nullopt;
      r[i] = e_[i] / k;
    }
    return TropElement(table_, std::move(r), Unchecked{});
  }

  std::string to_string() const {
    auto s = LaurentPoly::monomial(table_, e_).monomial_string(e_);
    return s.empty() ? "1" : s;
  }

 private:
  struct Unchecked {};
  TropElement(TablePtr table, ExponentVector e, Unchecked) : table_(std::move(table)), e_(std::move(e)) {}

  static void check(const TropElement& a, const TropElement& b) {
    if (!same_table(a.table_, b.table_)) throw TableMismatch();
  }

  TablePtr table_;
  ExponentVector e_;
};

inline TropElement trop_sum(const TropElement& a, const TropElement& b) { return oplus(a, b); }
inline TropElement trop_mul(const TropElement& a, const TropElement& b) { return a * b; }
inline TropElement trop_div(const TropElement& a, const TropElement& b) { return a / b; }

/// Tropical value of a subtraction-free polynomial in y, z: each term collapses
/// to its monomial and the sum becomes a componentwise minimum.
inline TropElement trop_evaluate(const LaurentPoly& p) {
  if (p.is_zero()) throw DivisionByZero();
  if (!p.has_positive_coefficients())
    throw InputError("tropical evaluation needs a subtraction-free polynomial: " + p.to_string());
  return TropElement(p.table(), p.min_exponents());
}

}  // namespace gencluster
