#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "gencluster/errors.hpp"

namespace gencluster {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer integer_gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(a, b);
}

inline Integer integer_pow(Integer base, unsigned exp) {
  Integer result = 1;
  while (exp != 0) {
    if (exp & 1u) result *= base;
    exp >>= 1u;
    if (exp != 0) base *= base;
  }
  return result;
}

/// Exact k-th root of a nonnegative integer, if one exists.
inline std::optional<Integer> integer_root(const Integer& value, unsigned k) {
  if (value < 0 || k == 0) return std::nullopt;
  if (k == 1 || value < 2) return value;
  Integer lo = 0;
  Integer hi = Integer(1) << (static_cast<unsigned>(boost::multiprecision::msb(value)) / k + 1);
  while (lo < hi) {
    Integer mid = (lo + hi + 1) / 2;
    if (integer_pow(mid, k) <= value) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  if (integer_pow(lo, k) == value) return lo;
  return std::nullopt;
}

inline bool fits_int64(const Integer& v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

// Checked small-integer arithmetic for exchange/C/G matrices.
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("int64 overflow in matrix arithmetic");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("int64 overflow in matrix arithmetic");
  return r;
}

/// [a]_+ = max(a, 0)
inline std::int64_t positive_part(std::int64_t a) { return a > 0 ? a : 0; }

}  // namespace gencluster
