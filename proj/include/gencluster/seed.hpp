#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "gencluster/errors.hpp"
#include "gencluster/matrix.hpp"
#include "gencluster/semifield.hpp"

namespace gencluster {

/// Square integer matrix satisfying the sign condition of skew-symmetrizable
/// matrices: b_ij = 0 iff b_ji = 0, and b_ij * b_ji <= 0.
class ExchangeMatrix {
 public:
  ExchangeMatrix() = default;
  explicit ExchangeMatrix(IntMatrix m) : m_(std::move(m)) { validate(m_); }
  ExchangeMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) : ExchangeMatrix(IntMatrix(rows)) {}

  static void validate(const IntMatrix& m) {
    if (!m.is_square() || m.rows() == 0) throw InvalidExchangeMatrix("exchange matrix must be square and nonempty");
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (m(i, i) != 0)
        throw InvalidExchangeMatrix("diagonal entry b_" + std::to_string(i + 1) + std::to_string(i + 1) + " must be 0");
      for (std::size_t j = i + 1; j < m.rows(); ++j) {
        const auto a = m(i, j);
        const auto b = m(j, i);
        if ((a == 0) != (b == 0) || (a > 0 && b > 0) || (a < 0 && b < 0))
          throw InvalidExchangeMatrix("sign condition violated at (" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + "): b_ij = " + std::to_string(a) +
                                      ", b_ji = " + std::to_string(b));
      }
    }
  }

  const IntMatrix& matrix() const { return m_; }
  int rank() const { return static_cast<int>(m_.rows()); }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  friend bool operator==(const ExchangeMatrix&, const ExchangeMatrix&) = default;

 private:
  IntMatrix m_;
};

/// Verifies that diag(dprime) B is skew-symmetric with positive dprime.
inline bool is_skew_symmetrizer(const IntMatrix& b, const std::vector<std::int64_t>& dprime) {
  if (dprime.size() != b.rows()) return false;
  for (auto v : dprime)
    if (v <= 0) return false;
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (checked_mul(dprime[i], b(i, j)) != -checked_mul(dprime[j], b(j, i))) return false;
  return true;
}

/// Generalized matrix mutation: b'_ij = -b_ij on row/column k, otherwise
/// b_ij + d_k ([-b_ik]_+ b_kj + b_ik [b_kj]_+). With d = (1,...,1) this is the
/// ordinary mutation.
inline IntMatrix mutate_matrix(const IntMatrix& b, const std::vector<int>& d, int k) {
  const auto n = b.rows();
  if (k < 0 || static_cast<std::size_t>(k) >= n) throw IndexOutOfRange("mutation direction out of range");
  if (d.size() != n) throw InputError("mutation degrees do not match the rank");
  const auto kk = static_cast<std::size_t>(k);
  IntMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == kk || j == kk) {
        r(i, j) = -b(i, j);
      } else {
        const auto update = checked_add(checked_mul(positive_part(-b(i, kk)), b(kk, j)),
                                         checked_mul(b(i, kk), positive_part(b(kk, j))));
        r(i, j) = checked_add(b(i, j), checked_mul(d[kk], update));
      }
    }
  return r;
}

inline ExchangeMatrix mutate_matrix(const ExchangeMatrix& b, const std::vector<int>& d, int k) {
  return ExchangeMatrix(mutate_matrix(b.matrix(), d, k));
}

inline IntMatrix ordinary_mutation(const IntMatrix& b, int k) {
  return mutate_matrix(b, std::vector<int>(b.rows(), 1), k);
}

inline IntMatrix degree_matrix(const std::vector<int>& d) {
  return IntMatrix::diagonal(std::vector<std::int64_t>(d.begin(), d.end()));
}

/// Mutation degrees d and frozen coefficients z_{i,s}, s = 0..d_i, as elements of S.
template <SemifieldInstance S>
struct MutationData {
  using Element = typename S::Element;

  std::vector<int> degrees;
  std::vector<std::vector<Element>> z;

  /// z_{i,s} bound to the symbolic generators of the table.
  static MutationData symbolic(const TablePtr& table) {
    MutationData data;
    data.degrees = table->degrees();
    for (int i = 0; i < table->rank(); ++i) {
      std::vector<Element> row;
      for (int s = 0; s <= table->degree(i); ++s) {
        const auto idx = table->z(i, s);
        row.push_back(idx ? S::generator(table, *idx) : S::one(table));
      }
      data.z.push_back(std::move(row));
    }
    return data;
  }

  /// z_{i,0} = z_{i,d_i} = 1 and z_{i,s} = z_{i,d_i-s}.
  void validate(const TablePtr& table) const {
    if (degrees != table->degrees()) throw InputError("mutation degrees do not match the variable table");
    if (z.size() != degrees.size()) throw InputError("frozen coefficients do not match the rank");
    const auto one = S::one(table);
    for (std::size_t i = 0; i < z.size(); ++i) {
      const int d = degrees[i];
      if (z[i].size() != static_cast<std::size_t>(d + 1)) throw InputError("frozen coefficient row has wrong length");
      if (!(z[i][0] == one) || !(z[i][d] == one))
        throw ReciprocityFailure("z_{" + std::to_string(i + 1) + ",0} and z_{i,d_i} must be 1");
      for (int s = 1; s < d; ++s)
        if (!(z[i][s] == z[i][d - s]))
          throw ReciprocityFailure("reciprocity z_{i,s} = z_{i,d_i-s} fails for i = " + std::to_string(i + 1));
    }
  }
};

/// Labeled seed (x, y, B) together with the shared (d, z) mutation data.
/// x lives in the ambient field, y in the semifield S.
template <SemifieldInstance S>
class Seed {
 public:
  using Element = typename S::Element;

  Seed(TablePtr table, std::vector<SfRational> x, std::vector<Element> y, ExchangeMatrix b,
       std::shared_ptr<const MutationData<S>> data)
      : table_(std::move(table)), x_(std::move(x)), y_(std::move(y)), b_(std::move(b)), data_(std::move(data)) {
    const auto n = static_cast<std::size_t>(table_->rank());
    if (x_.size() != n || y_.size() != n || static_cast<std::size_t>(b_.rank()) != n)
      throw InputError("seed components do not match the rank");
    if (!data_) throw InputError("seed requires mutation data");
  }

  /// Formal x_i, y_i and symbolic z over the given table.
  static Seed initial(const TablePtr& table, const ExchangeMatrix& b) {
    std::vector<SfRational> x;
    std::vector<Element> y;
    for (int i = 0; i < table->rank(); ++i) {
      x.push_back(SfRational::generator(table, table->x(i)));
      y.push_back(S::generator(table, table->y(i)));
    }
    auto data = std::make_shared<const MutationData<S>>(MutationData<S>::symbolic(table));
    return Seed(table, std::move(x), std::move(y), b, std::move(data));
  }

  int rank() const { return table_->rank(); }
  const TablePtr& table() const { return table_; }
  const std::vector<SfRational>& x() const { return x_; }
  const std::vector<Element>& y() const { return y_; }
  const ExchangeMatrix& B() const { return b_; }
  const MutationData<S>& data() const { return *data_; }
  const std::shared_ptr<const MutationData<S>>& data_ptr() const { return data_; }
  const std::vector<int>& degrees() const { return data_->degrees; }

  /// Componentwise exact equality.
  friend bool operator==(const Seed& a, const Seed& b) {
    if (!(a.b_ == b.b_)) return false;
    for (std::size_t i = 0; i < a.x_.size(); ++i)
      if (!(a.y_[i] == b.y_[i]) || !(a.x_[i] == b.x_[i])) return false;
    return true;
  }

 private:
  TablePtr table_;
  std::vector<SfRational> x_;
  std::vector<Element> y_;
  ExchangeMatrix b_;
  std::shared_ptr<const MutationData<S>> data_;
};

/// yhat_i = y_i prod_j x_j^{b_ji}, in the ambient field.
template <SemifieldInstance S>
std::vector<SfRational> yhat(const Seed<S>& seed) {
  std::vector<SfRational> out;
  const int n = seed.rank();
  for (int i = 0; i < n; ++i) {
    SfRational v = S::embed(seed.y()[i]);
    for (int j = 0; j < n; ++j)
      if (seed.B()(j, i) != 0) v = v * pow(seed.x()[j], seed.B()(j, i));
    out.push_back(std::move(v));
  }
  return out;
}

namespace detail {

inline void check_direction(int k, int n) {
  if (k < 0 || k >= n) throw IndexOutOfRange("mutation direction " + std::to_string(k + 1) + " out of range");
}

inline void check_sign(int eps) {
  if (eps != 1 && eps != -1) throw InputError("epsilon must be +1 or -1");
}

/// (+)_{s=0}^{d_k} z_{k,s} y_k^{eps s} in the semifield.
template <SemifieldInstance S>
typename S::Element coefficient_sum(const Seed<S>& seed, int k, int eps) {
  const int d = seed.degrees()[k];
  const auto& yk = seed.y()[k];
  auto acc = seed.data().z[k][0];
  for (int s = 1; s <= d; ++s) acc = oplus(acc, seed.data().z[k][s] * pow(yk, eps * s));
  return acc;
}

}  // namespace detail

/// y'_k = y_k^{-1}; y'_i = y_i (y_k^{[eps b_ki]_+})^{d_k} ((+)_s z_{k,s} y_k^{eps s})^{-b_ki}.
template <SemifieldInstance S>
std::vector<typename S::Element> mutate_y(const Seed<S>& seed, int k, int eps = 1) {
  detail::check_direction(k, seed.rank());
  detail::check_sign(eps);
  const int d = seed.degrees()[k];
  const auto& yk = seed.y()[k];
  const auto sum = detail::coefficient_sum(seed, k, eps);
  std::vector<typename S::Element> out;
  for (int i = 0; i < seed.rank(); ++i) {
    if (i == k) {
      out.push_back(pow(yk, -1));
      continue;
    }
    const auto bki = seed.B()(k, i);
    if (bki == 0) {
      out.push_back(seed.y()[i]);
      continue;
    }
    out.push_back(seed.y()[i] * pow(yk, d * positive_part(eps * bki)) * pow(sum, -bki));
  }
  return out;
}

/// x'_k = x_k^{-1} (prod_j x_j^{[-eps b_jk]_+})^{d_k} (sum_s z_{k,s} yhat_k^{eps s}) / ((+)_s z_{k,s} y_k^{eps s}).
template <SemifieldInstance S>
std::vector<SfRational> mutate_x(const Seed<S>& seed, int k, int eps = 1) {
  detail::check_direction(k, seed.rank());
  detail::check_sign(eps);
  const int n = seed.rank();
  const int d = seed.degrees()[k];
  SfRational yhat_k = S::embed(seed.y()[k]);
  for (int j = 0; j < n; ++j)
    if (seed.B()(j, k) != 0) yhat_k = yhat_k * pow(seed.x()[j], seed.B()(j, k));

  SfRational numerator = S::embed(seed.data().z[k][0]);
  for (int s = 1; s <= d; ++s) numerator = numerator + S::embed(seed.data().z[k][s]) * pow(yhat_k, eps * s);

  SfRational monomial = SfRational::one(seed.table());
  for (int j = 0; j < n; ++j) {
    const auto e = positive_part(-eps * seed.B()(j, k));
    if (e != 0) monomial = monomial * pow(seed.x()[j], d * e);
  }
  SfRational xk = numerator * monomial;
  xk = xk / seed.x()[k];
  xk = xk / S::embed(detail::coefficient_sum(seed, k, eps));

  std::vector<SfRational> out = seed.x();
  out[k] = std::move(xk);
  return out;
}

/// Mutation at k with eps = +1. With debug_epsilon the eps = -1 formulas are
/// evaluated too and any disagreement is an internal error.
template <SemifieldInstance S>
Seed<S> mutate_seed(const Seed<S>& seed, int k, bool debug_epsilon = false) {
  detail::check_direction(k, seed.rank());
  auto b = mutate_matrix(seed.B(), seed.degrees(), k);
  auto y = mutate_y(seed, k, +1);
  auto x = mutate_x(seed, k, +1);
  if (debug_epsilon) {
    auto y_neg = mutate_y(seed, k, -1);
    auto x_neg = mutate_x(seed, k, -1);
    for (int i = 0; i < seed.rank(); ++i)
      if (!(y[i] == y_neg[i]) || !(x[i] == x_neg[i]))
        throw Error("mutation at " + std::to_string(k + 1) + " depends on the sign epsilon");
  }
  return Seed<S>(seed.table(), std::move(x), std::move(y), std::move(b), seed.data_ptr());
}

/// Right-hand side of the yhat-mutation rule applied to yhat (in the ambient field):
/// yhat'_k = yhat_k^{-1}; yhat'_i = yhat_i (yhat_k^{[eps b_ki]_+})^{d_k} (sum_s z_{k,s} yhat_k^{eps s})^{-b_ki}.
template <SemifieldInstance S>
std::vector<SfRational> mutate_yhat(const std::vector<SfRational>& yh, const Seed<S>& seed, int k, int eps = 1) {
  detail::check_direction(k, seed.rank());
  detail::check_sign(eps);
  const int d = seed.degrees()[k];
  SfRational sum = S::embed(seed.data().z[k][0]);
  for (int s = 1; s <= d; ++s) sum = sum + S::embed(seed.data().z[k][s]) * pow(yh[k], eps * s);
  std::vector<SfRational> out;
  for (int i = 0; i < seed.rank(); ++i) {
    if (i == k) {
      out.push_back(pow(yh[k], -1));
      continue;
    }
    const auto bki = seed.B()(k, i);
    if (bki == 0) {
      out.push_back(yh[i]);
      continue;
    }
    out.push_back(yh[i] * pow(yh[k], d * positive_part(eps * bki)) * pow(sum, -bki));
  }
  return out;
}

/// Chekhov-Shapiro coefficients p_{i,s}, i = 1..n, s = 0..d_i.
template <SemifieldInstance S>
struct PCoefficients {
  std::vector<std::vector<typename S::Element>> p;

  friend bool operator==(const PCoefficients& a, const PCoefficients& b) {
    if (a.p.size() != b.p.size()) return false;
    for (std::size_t i = 0; i < a.p.size(); ++i) {
      if (a.p[i].size() != b.p[i].size()) return false;
      for (std::size_t s = 0; s < a.p[i].size(); ++s)
        if (!(a.p[i][s] == b.p[i][s])) return false;
    }
    return true;
  }
};

/// p_{i,s} = z_{i,s} y_i^s / (+)_r z_{i,r} y_i^r.
template <SemifieldInstance S>
PCoefficients<S> p_from_yz(const Seed<S>& seed) {
  PCoefficients<S> out;
  for (int i = 0; i < seed.rank(); ++i) {
    const int d = seed.degrees()[i];
    std::vector<typename S::Element> terms;
    for (int s = 0; s <= d; ++s) terms.push_back(seed.data().z[i][s] * pow(seed.y()[i], s));
    auto total = terms[0];
    for (int s = 1; s <= d; ++s) total = oplus(total, terms[s]);
    for (auto& t : terms) t = t / total;
    out.p.push_back(std::move(terms));
  }
  return out;
}

/// Throws NormalizationFailure unless (+)_s p_{i,s} = 1 for every i.
template <SemifieldInstance S>
void check_normalization(const PCoefficients<S>& p, const TablePtr& table) {
  const auto one = S::one(table);
  for (std::size_t i = 0; i < p.p.size(); ++i) {
    auto total = p.p[i][0];
    for (std::size_t s = 1; s < p.p[i].size(); ++s) total = oplus(total, p.p[i][s]);
    if (!(total == one)) throw NormalizationFailure("normalization fails for i = " + std::to_string(i + 1));
  }
}

/// The unique y_i with (p_{i,s}/p_{i,0}) (p_{i,d_i}/p_{i,d_i-s}) = y_i^{2s}, s = 1..d_i.
template <SemifieldInstance S>
typename S::Element quasi_reciprocity_root(const PCoefficients<S>& p, std::size_t i) {
  const auto& row = p.p.at(i);
  const int d = static_cast<int>(row.size()) - 1;
  if (d < 1) throw InputError("p-coefficient row must have at least two entries");
  const auto ratio = row[d] / row[0];
  auto root = S::root(ratio, d);
  if (!root) {
    if constexpr (std::is_same_v<S, Tropical>) {
      throw RootFailure("p_{" + std::to_string(i + 1) + ",d}/p_{" + std::to_string(i + 1) +
                        ",0} has no d-th root in Trop");
    } else {
      throw UnsupportedRoot("cannot extract a root of p_{" + std::to_string(i + 1) + ",d}/p_{" +
                            std::to_string(i + 1) + ",0} in the universal semifield");
    }
  }
  for (int s = 1; s <= d; ++s) {
    const auto lhs = (row[s] / row[0]) * (row[d] / row[d - s]);
    if (!(lhs == pow(*root, 2 * s)))
      throw ReciprocityFailure("quasi-reciprocity fails for i = " + std::to_string(i + 1) + ", s = " +
                               std::to_string(s));
  }
  return *root;
}

template <SemifieldInstance S>
struct RecoveredCoefficients {
  std::vector<typename S::Element> y;
  MutationData<S> data;
};

/// Inverse bridge: y_i from quasi-reciprocity, z_{i,s} = (p_{i,s}/p_{i,0}) y_i^{-s}.
template <SemifieldInstance S>
RecoveredCoefficients<S> yz_from_p(const PCoefficients<S>& p, const TablePtr& table) {
  check_normalization(p, table);
  RecoveredCoefficients<S> out;
  for (std::size_t i = 0; i < p.p.size(); ++i) {
    const auto& row = p.p[i];
    const int d = static_cast<int>(row.size()) - 1;
    auto yi = quasi_reciprocity_root(p, i);
    std::vector<typename S::Element> z;
    for (int s = 0; s <= d; ++s) z.push_back((row[s] / row[0]) * pow(yi, -s));
    out.y.push_back(std::move(yi));
    out.data.degrees.push_back(d);
    out.data.z.push_back(std::move(z));
  }
  out.data.validate(table);
  return out;
}

/// Mutation of p-coefficients: p'_{k,s} = p_{k,d_k-s}; for i != k the ratios
/// p'_{i,s}/p'_{i,0} pick up (p_{k,d_k}^{b_ki})^s or (p_{k,0}^{b_ki})^s by the
/// sign of b_ki, and normalization fixes p'_{i,0}.
template <SemifieldInstance S>
PCoefficients<S> mutate_p(const PCoefficients<S>& p, const IntMatrix& b, const std::vector<int>& d, int k) {
  const int n = static_cast<int>(p.p.size());
  detail::check_direction(k, n);
  PCoefficients<S> out = p;
  const int dk = d.at(k);
  for (int s = 0; s <= dk; ++s) out.p[k][s] = p.p[k][dk - s];
  for (int i = 0; i < n; ++i) {
    if (i == k) continue;
    const auto bki = b(k, i);
    if (bki == 0) continue;
    const auto& base = bki >= 0 ? p.p[k][dk] : p.p[k][0];
    const auto& row = p.p[i];
    std::vector<typename S::Element> ratios;
    for (std::size_t s = 0; s < row.size(); ++s)
      ratios.push_back((row[s] / row[0]) * pow(base, bki * static_cast<std::int64_t>(s)));
    auto total = ratios[0];
    for (std::size_t s = 1; s < ratios.size(); ++s) total = oplus(total, ratios[s]);
    for (std::size_t s = 0; s < ratios.size(); ++s) out.p[i][s] = ratios[s] / total;
  }
  return out;
}

}  // namespace gencluster
