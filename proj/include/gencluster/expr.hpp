#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "gencluster/errors.hpp"
#include "gencluster/matrix.hpp"
#include "gencluster/sf_rational.hpp"

namespace gencluster {

/// How the auxiliary addition (written "⊕" or "(+)") is interpreted.
enum class OplusMode {
  universal,  // ordinary addition
  tropical,   // componentwise minimum of the tropical values
};

/// Parser for expressions such as "x1^-1*(1 + z*yh1 + yh1^2)/(1 ⊕ z*y1 ⊕ y1^2)".
///
/// Identifiers: x<i>, y<i>, z_<i>_<s>, yh<i> (initial yhat, needs B), and
/// user aliases. Operators: + ⊕ * / ^ (integer exponent) and parentheses.
class ExpressionParser {
 public:
  ExpressionParser(TablePtr table, OplusMode mode) : table_(std::move(table)), mode_(mode) {}

  ExpressionParser& with_exchange_matrix(IntMatrix b) {
    b_ = std::move(b);
    has_b_ = true;
    return *this;
  }
  ExpressionParser& with_alias(std::string name, std::string target) {
    aliases_[std::move(name)] = std::move(target);
    return *this;
  }

  SfRational parse(std::string_view text) const {
    State st{text, 0};
    SfRational v = sum(st);
    skip(st);
    if (st.pos != text.size()) fail(st, "unexpected trailing input");
    return v;
  }

 private:
  struct State {
    std::string_view text;
    std::size_t pos;
  };

  [[noreturn]] static void fail(const State& st, const std::string& what) {
    throw InputError("expression error at offset " + std::to_string(st.pos) + " in \"" + std::string(st.text) +
                     "\": " + what);
  }

  static void skip(State& st) {
    while (st.pos < st.text.size() && std::isspace(static_cast<unsigned char>(st.text[st.pos]))) ++st.pos;
  }

  static bool accept(State& st, std::string_view tok) {
    skip(st);
    if (st.text.substr(st.pos, tok.size()) == tok) {
      st.pos += tok.size();
      return true;
    }
    return false;
  }

  SfRational combine_oplus(const SfRational& a, const SfRational& b) const {
    if (mode_ == OplusMode::universal) return a + b;
    return SfRational::embed(oplus(a.to_trop(), b.to_trop()));
  }

  SfRational sum(State& st) const {
    SfRational acc = product(st);
    while (true) {
      if (accept(st, "(+)") || accept(st, "\xE2\x8A\x95")) {
        acc = combine_oplus(acc, product(st));
      } else if (accept(st, "+")) {
        acc = acc + product(st);
      } else {
        return acc;
      }
    }
  }

  SfRational product(State& st) const {
    SfRational acc = power(st);
    while (true) {
      if (accept(st, "*")) {
        acc = acc * power(st);
      } else if (accept(st, "/")) {
        acc = acc / power(st);
      } else {
        return acc;
      }
    }
  }

  SfRational power(State& st) const {
    SfRational base = atom(st);
    if (!accept(st, "^")) return base;
    skip(st);
    bool negative = false;
    if (accept(st, "-")) negative = true;
    const std::int64_t e = integer(st);
    return pow(base, negative ? -e : e);
  }

  static std::int64_t integer(State& st) {
    skip(st);
    const std::size_t start = st.pos;
    std::int64_t v = 0;
    while (st.pos < st.text.size() && std::isdigit(static_cast<unsigned char>(st.text[st.pos]))) {
      if (v > (INT64_MAX - 9) / 10) fail(st, "integer too large");
      v = v * 10 + (st.text[st.pos] - '0');
      ++st.pos;
    }
    if (st.pos == start) fail(st, "expected an integer");
    return v;
  }

  SfRational atom(State& st) const {
    skip(st);
    if (st.pos >= st.text.size()) fail(st, "unexpected end of input");
    const char c = st.text[st.pos];
    if (c == '(') {
      ++st.pos;
      SfRational v = sum(st);
      if (!accept(st, ")")) fail(st, "expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = st.pos;
      while (st.pos < st.text.size() && std::isdigit(static_cast<unsigned char>(st.text[st.pos]))) ++st.pos;
      return SfRational::constant(table_, Integer(std::string(st.text.substr(start, st.pos - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = st.pos;
      while (st.pos < st.text.size() &&
             (std::isalnum(static_cast<unsigned char>(st.text[st.pos])) || st.text[st.pos] == '_'))
        ++st.pos;
      return identifier(st, std::string(st.text.substr(start, st.pos - start)));
    }
    fail(st, std::string("unexpected character '") + c + "'");
  }

  SfRational identifier(const State& st, std::string name) const {
    if (auto it = aliases_.find(name); it != aliases_.end()) name = it->second;
    if (name.size() > 2 && name.substr(0, 2) == "yh") {
      if (!has_b_) fail(st, "yhat requires an exchange matrix");
      int i = 0;
      for (char ch : name.substr(2)) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) fail(st, "bad identifier " + name);
        i = i * 10 + (ch - '0');
      }
      --i;
      if (i < 0 || i >= table_->rank()) fail(st, "identifier out of range: " + name);
      SfRational v = SfRational::generator(table_, table_->y(i));
      for (int j = 0; j < table_->rank(); ++j)
        if (b_(j, i) != 0)
          v = v * SfRational::generator(table_, table_->x(j), static_cast<std::int32_t>(b_(j, i)));
      return v;
    }
    const auto idx = table_->find(name);
    if (!idx) return SfRational::one(table_);
    return SfRational::generator(table_, *idx);
  }

  TablePtr table_;
  OplusMode mode_;
  IntMatrix b_;
  bool has_b_ = false;
  std::map<std::string, std::string> aliases_;
};

inline SfRational parse_expression(const TablePtr& table, std::string_view text,
                                   OplusMode mode = OplusMode::universal) {
  return ExpressionParser(table, mode).parse(text);
}

}  // namespace gencluster
