#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <boost/container/small_vector.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "liereduce/symbol.hpp"

namespace liereduce {

using Rational = mpq_class;

struct VarPower {
  std::uint32_t var;
  std::uint32_t exp;
  friend bool operator==(const VarPower&, const VarPower&) = default;
};

/// Power product of symbols, stored sparsely and sorted by symbol id.
class Monomial {
 public:
  using Factors = boost::container::small_vector<VarPower, 4>;

  Monomial() = default;
  static Monomial variable(Symbol s, std::uint32_t exp = 1);

  const Factors& factors() const { return factors_; }
  std::uint32_t degree() const { return degree_; }
  bool is_one() const { return factors_.empty(); }
  std::uint32_t exponent(Symbol s) const;
  bool contains(Symbol s) const { return exponent(s) != 0; }

  Monomial operator*(const Monomial& other) const;
  bool divides(const Monomial& other) const;
  /// this / divisor; divisor must divide this.
  Monomial quotient(const Monomial& divisor) const;
  static Monomial gcd(const Monomial& a, const Monomial& b);

  /// Drops the given symbol from the product.
  Monomial without(Symbol s) const;
  /// Splits into (part over `keep`, rest); `keep` is a predicate on symbol ids.
  template <class Pred>
  std::pair<Monomial, Monomial> split(Pred keep) const {
    Monomial in, out;
    for (const auto& f : factors_) {
      auto& dst = keep(f.var) ? in : out;
      dst.factors_.push_back(f);
      dst.degree_ += f.exp;
    }
    return {std::move(in), std::move(out)};
  }

  std::size_t hash() const;

  /// Graded lexicographic comparison: sign of (a - b).
  static int compare(const Monomial& a, const Monomial& b);

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.degree_ == b.degree_ && a.factors_ == b.factors_;
  }

 private:
  Factors factors_;
  std::uint32_t degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct MonomialGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return Monomial::compare(a, b) > 0; }
};

/// Sparse multivariate polynomial over Q. Terms are kept sorted in
/// decreasing graded-lex order with nonzero coefficients, so structural
/// equality is mathematical equality.
class Poly {
 public:
  struct Term {
    Monomial mono;
    Rational coeff;
  };

  Poly() = default;
  Poly(long value);  // NOLINT(google-explicit-constructor)
  Poly(const Rational& value);  // NOLINT(google-explicit-constructor)
  static Poly variable(Symbol s);
  static Poly monomial(Monomial m, Rational c);
  /// Combines and sorts arbitrary terms.
  static Poly from_terms(std::vector<Term> terms);
  /// Adopts terms already sorted decreasingly with distinct monomials and
  /// nonzero coefficients.
  static Poly from_sorted_terms(std::vector<Term> terms) {
    Poly p;
    p.terms_ = std::move(terms);
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  /// Value of a constant polynomial.
  Rational constant_value() const;
  /// Coefficient of the monomial 1.
  Rational constant_term() const;
  const Term& leading() const { return terms_.front(); }

  std::uint32_t total_degree() const;
  std::uint32_t degree(Symbol s) const;
  bool contains(Symbol s) const;
  /// Symbols occurring in the polynomial, ordered by id.
  std::vector<Symbol> variables() const;

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly scaled(const Rational& c) const;
  Poly times_monomial(const Monomial& m, const Rational& c) const;
  Poly pow(unsigned e) const;

  /// Quotient if `d` divides this exactly, otherwise nullopt.
  std::optional<Poly> divide_exact(const Poly& d) const;
  Poly diff(Symbol s) const;

  /// Rational c with this / c having coprime integer coefficients and a
  /// positive leading coefficient. Zero for the zero polynomial.
  Rational content() const;
  Poly primitive() const;
  Monomial monomial_content() const;

  std::size_t hash() const;
  friend bool operator==(const Poly& a, const Poly& b);

 private:
  std::vector<Term> terms_;
};

/// Accumulates terms in a hash map; `take` returns the sorted polynomial.
class PolyAccumulator {
 public:
  void reserve(std::size_t n) { map_.reserve(n); }
  void add(const Monomial& m, const Rational& c);
  void add(const Poly& p);
  void add_product(const Poly& p, const Monomial& m, const Rational& c);
  Poly take();

 private:
  std::unordered_map<Monomial, Rational, MonomialHash> map_;
};

/// Greatest common divisor over Q, normalised to a primitive integer
/// polynomial with positive leading coefficient (gcd(0,0) = 0).
Poly gcd(const Poly& a, const Poly& b);

/// Coefficients of `p` viewed as a polynomial in the symbols selected by
/// `in_set`: pairs (monomial over the set, coefficient over the rest),
/// ordered by decreasing monomial.
template <class Pred>
std::vector<std::pair<Monomial, Poly>> coefficients_in(const Poly& p, Pred in_set) {
  std::unordered_map<Monomial, std::vector<Poly::Term>, MonomialHash> groups;
  for (const auto& t : p.terms()) {
    auto [in, out] = t.mono.split(in_set);
    groups[in].push_back({std::move(out), t.coeff});
  }
  std::vector<std::pair<Monomial, Poly>> out;
  out.reserve(groups.size());
  for (auto& [m, ts] : groups) out.emplace_back(m, Poly::from_terms(std::move(ts)));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return Monomial::compare(a.first, b.first) > 0; });
  return out;
}

/// Dense coefficient list of `p` in `x` (index = power).
std::vector<Poly> to_univariate(const Poly& p, Symbol x);
Poly from_univariate(const std::vector<Poly>& coeffs, Symbol x);

/// Evaluates with every symbol bound; throws if a symbol is unbound.
class Valuation;
Rational evaluate(const Poly& p, const Valuation& v);

/// Dense symbol-id indexed assignment of rational values.
class Valuation {
 public:
  void set(Symbol s, Rational value);
  bool has(Symbol s) const;
  const Rational& get(Symbol s) const;
  std::vector<Symbol> symbols() const;

 private:
  std::vector<std::optional<Rational>> values_;
};

}  // namespace liereduce
