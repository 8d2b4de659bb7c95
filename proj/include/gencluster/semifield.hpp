#pragma once

#include <concepts>
#include <optional>
#include <string_view>

#include "gencluster/poly.hpp"
#include "gencluster/sf_rational.hpp"
#include "gencluster/tropical.hpp"

namespace gencluster {

/// Trop(y, z). Patterns over it are the principal-coefficient patterns.
struct Tropical {
  using Element = TropElement;
  static constexpr std::string_view name = "principal";

  static Element one(const TablePtr& t) { return TropElement::one(t); }
  static Element generator(const TablePtr& t, std::size_t idx) { return TropElement::generator(t, idx); }
  static SfRational embed(const Element& e) { return SfRational::embed(e); }
  static Element evaluate(const LaurentPoly& p) { return trop_evaluate(p); }
  static std::optional<Element> root(const Element& e, int k) { return e.root(k); }
  static TropElement to_trop(const Element& e) { return e; }
};

/// Q_sf(y, z), the universal semifield.
struct Universal {
  using Element = SfRational;
  static constexpr std::string_view name = "universal";

  static Element one(const TablePtr& t) { return SfRational::one(t); }
  static Element generator(const TablePtr& t, std::size_t idx) { return SfRational::generator(t, idx); }
  static SfRational embed(const Element& e) { return e; }
  static Element evaluate(const LaurentPoly& p) {
    if (!p.has_positive_coefficients())
      throw InputError("semifield evaluation needs a subtraction-free polynomial: " + p.to_string());
    return SfRational::from_poly(p);
  }
  /// Undecided roots (exponents not divisible in the stored factorization) report nullopt.
  static std::optional<Element> root(const Element& e, int k) { return e.root(k); }
  static TropElement to_trop(const Element& e) { return e.to_trop(); }
};

/// A semifield instance: element type with *, /, pow, oplus, == and the
/// static construction/embedding hooks above.
template <class S>
concept SemifieldInstance = requires(const typename S::Element& a, const TablePtr& t, const LaurentPoly& p) {
  { a* a } -> std::convertible_to<typename S::Element>;
  { a / a } -> std::convertible_to<typename S::Element>;
  { oplus(a, a) } -> std::convertible_to<typename S::Element>;
  { pow(a, std::int64_t{2}) } -> std::convertible_to<typename S::Element>;
  { a == a } -> std::convertible_to<bool>;
  { S::one(t) } -> std::convertible_to<typename S::Element>;
  { S::generator(t, std::size_t{0}) } -> std::convertible_to<typename S::Element>;
  { S::embed(a) } -> std::convertible_to<SfRational>;
  { S::evaluate(p) } -> std::convertible_to<typename S::Element>;
};

static_assert(SemifieldInstance<Tropical>);
static_assert(SemifieldInstance<Universal>);

}  // namespace gencluster
