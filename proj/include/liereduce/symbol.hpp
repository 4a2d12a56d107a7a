#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace liereduce {

/// Error raised by every module for malformed input or unsupported requests.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Interned symbol. Symbols with the same name share one id for the lifetime
/// of the process; the id also fixes the variable order used by monomial
/// comparisons (smaller id ranks higher in lexicographic ties).
class Symbol {
 public:
  Symbol() = default;

  static Symbol intern(std::string_view name);
  static std::optional<Symbol> lookup(std::string_view name);
  static Symbol from_id(std::uint32_t id);

  /// Fresh symbol whose name starts with `prefix` and collides with nothing.
  static Symbol fresh(std::string_view prefix);

  std::uint32_t id() const { return id_; }
  const std::string& name() const;

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend auto operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

 private:
  explicit Symbol(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;
};

/// Orders symbols by name; used wherever output must not depend on
/// interning order.
struct SymbolNameLess {
  bool operator()(Symbol a, Symbol b) const;
};

}  // namespace liereduce

template <>
struct std::hash<liereduce::Symbol> {
  std::size_t operator()(liereduce::Symbol s) const noexcept { return std::hash<std::uint32_t>{}(s.id()); }
};
