#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gencluster/errors.hpp"

namespace gencluster {

enum class GeneratorKind { x, y, z };

struct Generator {
  GeneratorKind kind;
  int direction;  // 0-based i
  int step = 0;   // s for z_{i,s}, canonical (s <= d_i / 2)
};

/// Generator layout shared by every polynomial of one computation:
/// x_1..x_n, y_1..y_n, then z_{i,s} for d_i >= 2 and 1 <= s <= floor(d_i/2).
///
/// z_{i,s} and z_{i,d_i-s} resolve to the same index, and z_{i,0} = z_{i,d_i} = 1
/// resolve to no generator at all.
class VariableTable {
 public:
  explicit VariableTable(std::vector<int> degrees) : degrees_(std::move(degrees)) {
    if (degrees_.empty()) throw InputError("rank must be positive");
    const int n = rank();
    for (int d : degrees_)
      if (d < 1) throw InputError("mutation degrees must be positive");
    for (int i = 0; i < n; ++i) generators_.push_back({GeneratorKind::x, i});
    for (int i = 0; i < n; ++i) generators_.push_back({GeneratorKind::y, i});
    z_offset_.assign(n, -1);
    for (int i = 0; i < n; ++i) {
      if (degrees_[i] < 2) continue;
      z_offset_[i] = static_cast<int>(generators_.size());
      for (int s = 1; s <= degrees_[i] / 2; ++s) generators_.push_back({GeneratorKind::z, i, s});
    }
  }

  static std::shared_ptr<const VariableTable> make(std::vector<int> degrees) {
    return std::make_shared<const VariableTable>(std::move(degrees));
  }

  int rank() const { return static_cast<int>(degrees_.size()); }
  const std::vector<int>& degrees() const { return degrees_; }
  int degree(int i) const { return degrees_.at(i); }
  std::size_t size() const { return generators_.size(); }

  std::size_t x(int i) const { return check(i), static_cast<std::size_t>(i); }
  std::size_t y(int i) const { return check(i), static_cast<std::size_t>(rank() + i); }

  /// Index of z_{i,s}; nullopt for the constants z_{i,0} = z_{i,d_i} = 1.
  std::optional<std::size_t> z(int i, int s) const {
    check(i);
    const int d = degrees_[i];
    if (s < 0 || s > d) throw IndexOutOfRange("z step out of range");
    const int canonical = s <= d - s ? s : d - s;
    if (canonical == 0) return std::nullopt;
    return static_cast<std::size_t>(z_offset_[i] + canonical - 1);
  }

  const Generator& generator(std::size_t idx) const { return generators_.at(idx); }
  bool is_x(std::size_t idx) const { return generators_.at(idx).kind == GeneratorKind::x; }

  std::string name(std::size_t idx) const {
    const Generator& g = generators_.at(idx);
    switch (g.kind) {
      case GeneratorKind::x:
        return "x" + std::to_string(g.direction + 1);
      case GeneratorKind::y:
        return "y" + std::to_string(g.direction + 1);
      case GeneratorKind::z:
        return "z_" + std::to_string(g.direction + 1) + "_" + std::to_string(g.step);
    }
    return {};
  }

  /// Resolves "x3", "y1", "z_1_1" (any s, canonicalized). Returns nullopt for
  /// names that denote the constant 1 (z_i_0, z_i_{d_i}) and throws on unknown names.
  std::optional<std::size_t> find(std::string_view name) const {
    auto parse_int = [&](std::string_view s) -> int {
      if (s.empty()) throw InputError("bad generator name: " + std::string(name));
      int v = 0;
      for (char c : s) {
        if (c < '0' || c > '9') throw InputError("bad generator name: " + std::string(name));
        v = v * 10 + (c - '0');
      }
      return v;
    };
    if (name.size() >= 2 && (name[0] == 'x' || name[0] == 'y')) {
      const int i = parse_int(name.substr(1)) - 1;
      if (i < 0 || i >= rank()) throw InputError("generator out of range: " + std::string(name));
      return name[0] == 'x' ? x(i) : y(i);
    }
    if (name.size() >= 5 && name.substr(0, 2) == "z_") {
      const auto rest = name.substr(2);
      const auto us = rest.find('_');
      if (us == std::string_view::npos) throw InputError("bad generator name: " + std::string(name));
      const int i = parse_int(rest.substr(0, us)) - 1;
      const int s = parse_int(rest.substr(us + 1));
      if (i < 0 || i >= rank() || s > degrees_[i])
        throw InputError("generator out of range: " + std::string(name));
      return z(i, s);
    }
    throw InputError("unknown generator: " + std::string(name));
  }

  friend bool operator==(const VariableTable& a, const VariableTable& b) { return a.degrees_ == b.degrees_; }

 private:
  void check(int i) const {
    if (i < 0 || i >= rank()) throw IndexOutOfRange("direction out of range");
  }

  std::vector<int> degrees_;
  std::vector<Generator> generators_;
  std::vector<int> z_offset_;
};

using TablePtr = std::shared_ptr<const VariableTable>;

inline bool same_table(const TablePtr& a, const TablePtr& b) { return a == b || (a && b && *a == *b); }

}  // namespace gencluster
