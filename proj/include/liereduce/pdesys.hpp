#pragma once

#include <memory>
#include <optional>
#include <unordered_set>
#include <vector>

#include "liereduce/linear.hpp"

namespace liereduce {

/// First-order jet space: independent variables x_i, dependent variables
/// u_a, derivative symbols u_{a,i} (named "d(ua,xi)"), parameters and
/// function parameters. Indices are 0-based in the API.
class JetContext {
 public:
  JetContext() = default;
  JetContext(std::vector<Symbol> indep, std::vector<Symbol> dep, std::vector<Symbol> params = {},
             FunctionTable functions = {});

  std::size_t n() const { return x_.size(); }
  std::size_t m() const { return u_.size(); }
  const std::vector<Symbol>& x() const { return x_; }
  const std::vector<Symbol>& u() const { return u_; }
  const std::vector<Symbol>& params() const { return params_; }
  const FunctionTable& functions() const { return functions_; }

  void add_param(Symbol p);
  void add_function(Symbol f, std::vector<Symbol> args);

  /// Derivative symbol u_{a,i}.
  Symbol deriv(std::size_t a, std::size_t i) const { return derivs_[a * n() + i]; }
  /// All derivative symbols, row-major (a, then i).
  const std::vector<Symbol>& derivatives() const { return derivs_; }
  std::optional<std::pair<std::size_t, std::size_t>> derivative_index(Symbol s) const;
  bool is_derivative(Symbol s) const { return deriv_ids_.contains(s.id()); }
  bool is_derivative_id(std::uint32_t id) const { return deriv_ids_.contains(id); }
  std::optional<std::size_t> indep_index(Symbol s) const;
  std::optional<std::size_t> dep_index(Symbol s) const;
  bool is_declared(Symbol s) const;

  /// The m x n gradient matrix H with H(a,i) = u_{a,i}.
  ExprMatrix gradient_matrix() const;

  /// Name of the derivative symbol of dependent `u` by independent `x`.
  static std::string derivative_name(Symbol u, Symbol x);

 private:
  std::vector<Symbol> x_, u_, params_, derivs_;
  std::unordered_set<std::uint32_t> deriv_ids_;
  FunctionTable functions_;
};

/// Term of an equation: coefficient(x,u,params) * product of derivatives.
struct DerivMonomial {
  Monomial derivatives;
  Expr coefficient;
  std::uint32_t degree() const { return derivatives.degree(); }
};

/// First-order system polynomial in the derivatives. Each equation is an
/// Expr whose denominator is free of derivative symbols; the equation is
/// understood as "expr = 0".
class PdeSystem {
 public:
  PdeSystem() = default;
  /// Throws Error("not polynomial in derivatives") or
  /// Error("degenerate equation") for invalid equations.
  PdeSystem(JetContext ctx, std::vector<Expr> equations);

  const JetContext& context() const { return ctx_; }
  const std::vector<Expr>& equations() const { return eqs_; }
  std::size_t size() const { return eqs_.size(); }

 private:
  JetContext ctx_;
  std::vector<Expr> eqs_;
};

/// Per-equation expansion into derivative monomials (collected, ordered by
/// decreasing graded-lex derivative monomial; the degree-0 part is B^s).
std::vector<std::vector<DerivMonomial>> decompose(const PdeSystem& sys);
std::vector<DerivMonomial> decompose_equation(const JetContext& ctx, const Expr& eq);
Expr recompose(const std::vector<DerivMonomial>& terms);

std::vector<std::uint32_t> degree_in_derivatives(const PdeSystem& sys);
bool is_autonomous(const PdeSystem& sys);
/// N̄_s per equation, nullopt when equation s is not homogeneous.
std::vector<std::optional<std::uint32_t>> homogeneity_degree(const PdeSystem& sys);
bool is_quasilinear(const PdeSystem& sys);

/// All order x order minors of the gradient matrix. Ordering: row subsets
/// lexicographic, then column subsets lexicographic; for square gradients
/// with order = n-1 >= 2 the minors are labeled by the deleted (row, column)
/// pair in lexicographic order (the cofactor-style labeling).
std::vector<Expr> gradient_minors(const JetContext& ctx, std::size_t order);

/// Lexicographic k-subsets of {0..n-1}.
std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k);

}  // namespace liereduce
