#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "liereduce/poly.hpp"

namespace liereduce {

/// Declared function parameters f(args...) and their generated partial
/// derivative symbols. A partial is the interned symbol "d(f,a,b,...)" with
/// the differentiation variables listed in declaration order (so mixed
/// partials are symmetric by construction).
class FunctionTable {
 public:
  struct Info {
    Symbol function;
    std::vector<unsigned> orders;  // per declared argument
  };

  void declare(Symbol f, std::vector<Symbol> args);
  bool declared(Symbol f) const;
  const std::vector<Symbol>& args(Symbol f) const;
  const std::vector<Symbol>& functions() const { return functions_; }

  /// Function-or-partial description of `s`, nullopt for ordinary symbols.
  std::optional<Info> info(Symbol s) const;
  /// Symbol of the partial derivative with the given per-argument orders.
  Symbol partial_symbol(Symbol f, const std::vector<unsigned>& orders) const;
  /// d s / d x for a function-or-partial symbol s; nullopt when s does not
  /// depend on x.
  std::optional<Symbol> partial(Symbol s, Symbol x) const;
  /// First partial f_{;x}.
  Symbol first_partial(Symbol f, Symbol x) const;

 private:
  std::vector<Symbol> functions_;
  std::unordered_map<Symbol, std::vector<Symbol>> args_;
};

class Expr;
using Substitution = std::unordered_map<Symbol, Expr>;

/// Immutable multivariate rational function in canonical form:
/// gcd(num, den) = 1, den primitive over Z with positive leading coefficient
/// (den = 1 for polynomials).
class Expr {
 public:
  Expr();
  Expr(long value);            // NOLINT(google-explicit-constructor)
  Expr(int value) : Expr(static_cast<long>(value)) {}  // NOLINT
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)
  Expr(Poly p);                 // NOLINT(google-explicit-constructor)
  Expr(Symbol s);               // NOLINT(google-explicit-constructor)
  /// num / den, normalized. Throws Error("zero denominator") when den = 0.
  static Expr fraction(Poly num, Poly den);

  const Poly& num() const { return data_->num; }
  const Poly& den() const { return data_->den; }

  bool is_zero() const { return num().is_zero(); }
  bool is_polynomial() const { return den().is_constant(); }
  bool is_constant() const { return num().is_constant() && den().is_constant(); }
  Rational constant_value() const;
  bool contains(Symbol s) const { return num().contains(s) || den().contains(s); }
  std::vector<Symbol> symbols() const;
  /// Total number of terms in numerator and denominator.
  std::size_t size() const { return num().size() + den().size(); }
  std::size_t hash() const;

  Expr operator-() const;
  Expr operator+(const Expr& o) const;
  Expr operator-(const Expr& o) const;
  Expr operator*(const Expr& o) const;
  Expr operator/(const Expr& o) const;
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  Expr& operator/=(const Expr& o) { return *this = *this / o; }
  Expr pow(int e) const;

  /// Partial derivative; declared function parameters obey the chain rule.
  Expr diff(Symbol x, const FunctionTable* functions = nullptr) const;
  /// Simultaneous substitution.
  Expr substitute(const Substitution& bindings) const;
  /// Value at a point; nullopt when the denominator vanishes there.
  std::optional<Rational> evaluate(const Valuation& v) const;

  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b) {
    return a.data_ == b.data_ || (a.num() == b.num() && a.den() == b.den());
  }

 private:
  struct Data {
    Poly num;
    Poly den;
  };
  explicit Expr(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  static Expr make(Poly num, Poly den);  // already canonical
  std::shared_ptr<const Data> data_;
};

/// Canonical form (expressions are always canonical; kept for API parity).
inline Expr normalize(const Expr& e) { return e; }
inline bool equals(const Expr& a, const Expr& b) { return a == b; }
inline Expr diff(const Expr& e, Symbol s, const FunctionTable* ft = nullptr) { return e.diff(s, ft); }
inline Expr substitute(const Expr& e, const Substitution& b) { return e.substitute(b); }

/// Substitutes into a polynomial; the result is normalized.
Expr substitute_poly(const Poly& p, const Substitution& bindings);
/// Polynomial derivative with the chain rule for function parameters.
Poly diff_poly(const Poly& p, Symbol x, const FunctionTable* functions);

std::string to_string(const Poly& p);
std::string to_string(const Rational& q);

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

}  // namespace liereduce
