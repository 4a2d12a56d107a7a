#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "liereduce/pdesys.hpp"

namespace liereduce {

/// X = sum xi_i d/dx_i + sum eta_a d/du_a with components in (x,u,params).
struct VectorField {
  std::vector<Expr> xi;
  std::vector<Expr> eta;

  static VectorField zero(const JetContext& ctx);
  /// d/dx_i.
  static VectorField translation(const JetContext& ctx, std::size_t i);
  bool is_zero() const;
  VectorField operator+(const VectorField& o) const;
  VectorField operator-(const VectorField& o) const;
  VectorField scaled(const Expr& c) const;
  friend bool operator==(const VectorField& a, const VectorField& b) { return a.xi == b.xi && a.eta == b.eta; }
};

/// "a*d/dx1 + b*d/du2" style rendering (zero components omitted).
std::string to_string(const JetContext& ctx, const VectorField& X);

/// X(e): the derivation applied to a derivative-free expression; declared
/// function parameters follow the chain rule.
Expr apply_field(const JetContext& ctx, const VectorField& X, const Expr& e);
VectorField lie_bracket(const JetContext& ctx, const VectorField& X, const VectorField& Y);

/// D_i e for e free of derivative symbols. Throws otherwise.
Expr total_derivative(const JetContext& ctx, const Expr& e, std::size_t i);

struct ProlongedField {
  VectorField base;
  std::vector<Expr> eta1;  // row-major (a, i), matching ctx.derivatives()
};
ProlongedField prolong1(const JetContext& ctx, const VectorField& X);
/// pr^1 X (e) for e in (x, u, u^(1), params).
Expr apply_prolonged(const JetContext& ctx, const ProlongedField& P, const Expr& e);

enum class Verdict { yes, no, undecided };
std::string to_string(Verdict v);

struct SymmetryOptions {
  /// Explicit multiplier degree bound; default max N_s - 1 with one retry
  /// at max N_s.
  std::optional<int> multiplier_degree;
  std::uint64_t seed = 0;
  int refutation_attempts = 24;
};

struct SymmetryResult {
  Verdict verdict = Verdict::undecided;
  int degree_used = -1;                       // multiplier degree of the certificate
  std::vector<std::vector<Expr>> multipliers;  // lambda[s][t] when verdict = yes
  /// Refutation data when verdict = no: the jet point, the equation index
  /// and the nonzero value of pr^1 X (Delta_s) there.
  std::vector<std::pair<Symbol, Rational>> point;
  std::size_t refuted_equation = 0;
  Rational refuted_value;
  std::vector<int> degrees_tried;
};

SymmetryResult is_symmetry(const VectorField& X, const PdeSystem& sys, const SymmetryOptions& opts = {});

/// Multiplier-certificate search for a single equation s at degree d:
/// returns lambda_{s,t} (t over all equations) when pr^1 X(Delta_s) lies in
/// the span. On failure `residuals` (if non-null) receives the
/// unknown-free inconsistency conditions of the coefficient system.
std::optional<std::vector<Expr>> find_multipliers(const ProlongedField& P, const PdeSystem& sys, std::size_t s, int d,
                                                  std::vector<Expr>* residuals = nullptr);

struct RankReport {
  std::size_t rank = 0;
  /// Nonzero rank x rank minor of the component matrix (rows = fields,
  /// columns = (x, u) components); the distribution degenerates where it
  /// vanishes.
  Expr pivot_minor;
  std::vector<std::size_t> pivot_rows, pivot_cols;
};
RankReport distribution_rank(const JetContext& ctx, const std::vector<VectorField>& fields);

/// Linear independence over the constants Q(params): no nontrivial
/// combination with coefficients free of x, u and function parameters
/// vanishes.
bool independent_over_constants(const JetContext& ctx, const std::vector<VectorField>& fields);

/// Coefficients c (free of x, u, function symbols) with Y = sum c_k X_k, if any.
std::optional<std::vector<Expr>> express_in_span(const JetContext& ctx, const VectorField& Y,
                                                 const std::vector<VectorField>& fields);

struct BracketEntry {
  std::size_t a = 0, b = 0;
  VectorField value;
  std::optional<std::vector<Expr>> combination;  // against the input fields
  bool expected_ok = true;
  std::string expected;  // "0" or "Xi_k"
};

struct StructureReport {
  std::vector<BracketEntry> brackets;
  bool brackets_ok = true;
  std::size_t abelian_rank = 0;  // function-field rank of Xi_1..Xi_n
  RankReport rank;               // function-field rank of all n+1 fields
  bool independent = true;       // over constants
  bool rank_ok = true;
  std::vector<std::pair<std::string, Expr>> invariance;  // (label, Xi(w)) nonzero entries
  bool invariants_ok = true;
  bool pass() const { return brackets_ok && rank_ok && invariants_ok; }
};

/// Reduction structure check for n+1 fields; `invariants` are candidate
/// new dependent variables w that must be annihilated by every field.
StructureReport check_reduction_structure(const JetContext& ctx, const std::vector<VectorField>& fields,
                                          const std::vector<Expr>& invariants = {});

/// Symbols that act as constants for span/independence questions.
bool is_constant_symbol(const JetContext& ctx, Symbol s);

}  // namespace liereduce
