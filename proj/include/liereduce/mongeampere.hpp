#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liereduce/transform.hpp"

namespace liereduce {

/// First-order Monge–Ampère system: equation i is
///   sum_j kappa[i][j] * T_j = 0
/// over the term list T of `ma_terms` (all minors of the gradient matrix from
/// the top order down to 2, then the derivatives row-major, then 1). Table
/// column j corresponds to the label kappa^i_{j + base} with base 0 when
/// m == n (the top term is det H) and 1 otherwise.
struct MongeAmpereSpec {
  std::size_t m = 2, n = 2;
  JetContext ctx;  // x1..xn, u1..um, functions f1..fn (and kappa functions)
  std::vector<std::vector<Expr>> kappa;

  std::size_t base() const { return m == n ? 0 : 1; }
  /// Coefficient kappa^i_label (1-based equation index, table-column label).
  const Expr& at(std::size_t i, std::size_t label) const;
  /// Symbols f1..fn declared in ctx.
  std::vector<Symbol> f_symbols() const;
};

/// Jet context x1..xn, u1..um with functions f1..fn of u declared.
JetContext ma_context(std::size_t m, std::size_t n);
/// Term list T_j for the (m, n) family; `degrees` receives deg T_j.
std::vector<Expr> ma_terms(const JetContext& ctx, std::vector<unsigned>* degrees = nullptr);
std::size_t ma_table_width(std::size_t m, std::size_t n);

/// Spec with rational entries; rows = equations.
MongeAmpereSpec constant_spec(std::size_t m, std::size_t n, const std::vector<std::vector<Rational>>& table);
/// Spec whose entries are declared function symbols k<i>_<label>(u); with
/// `homogeneous` the inhomogeneous column is zero.
MongeAmpereSpec symbolic_spec(std::size_t m, std::size_t n, std::size_t equations = 0, bool homogeneous = false);
/// Spec from arbitrary entries in `ctx` (validated for shape).
MongeAmpereSpec make_spec(JetContext ctx, std::vector<std::vector<Expr>> table);
bool is_constant_spec(const MongeAmpereSpec& spec);

PdeSystem build_system(const MongeAmpereSpec& spec);

/// u -> u + alpha x elimination of the inhomogeneous coefficient.
struct ShiftSolution {
  bool found = false;
  std::vector<std::vector<Rational>> alpha;  // m x n
  MongeAmpereSpec shifted;                   // valid when found
  /// Conditions Delta_i(alpha) = 0 in the symbols alpha<a><i>; the
  /// residuals at the best attempt when not found.
  std::vector<Expr> conditions;
  std::vector<Expr> residuals;
  std::string method;  // "row k", "column k", "search", "symbolic"
};
ShiftSolution eliminate_inhomogeneity(const MongeAmpereSpec& spec, int search_radius = 5);
/// Re-expresses Delta_i(p + alpha) on the term list (constant kappa only).
MongeAmpereSpec shift_spec(const MongeAmpereSpec& spec, const std::vector<std::vector<Rational>>& alpha);

/// Symmetry conditions for Xi_{n+1} = sum (x_i - f_i(u)) d/dx_i, per
/// equation, each normalized so that its pivot coefficient (the highest-
/// order minor coefficient it determines) is 1.
struct ConstraintSet {
  std::vector<std::vector<Expr>> per_equation;
  /// Table labels of the pivot coefficients, aligned with per_equation[i].
  std::vector<std::size_t> pivot_labels;
  /// Conditions on the derivative coefficients alone (empty for the
  /// Monge–Ampère families).
  std::vector<std::vector<Expr>> extra;
  std::vector<Expr> all() const;
};

/// Generic constraint template for one equation with plain coefficient
/// symbols K<label>: derived by matching pr^1 Xi (Delta) = lambda Delta degree
/// by degree in the derivatives (each stage is linear in the multiplier
/// part and the minor coefficients of that degree).
struct ConstraintTemplate {
  std::size_t m = 0, n = 0;
  std::vector<Symbol> coefficient_symbols;  // K<label> in table order
  std::vector<Expr> conditions;             // K_pivot - (expression in linear Ks and f)
  std::vector<std::size_t> pivot_labels;
  std::vector<Expr> extra;
  Expr multiplier;  // lambda found for the generic equation
};
const ConstraintTemplate& constraint_template(std::size_t m, std::size_t n);

ConstraintSet symmetry_constraints(const MongeAmpereSpec& spec);
/// Substitutes f_{i;a} -> d f_i / d u_a for concrete f (in u).
std::vector<Expr> instantiate_f(const MongeAmpereSpec& spec, const std::vector<Expr>& conditions,
                                const std::vector<Expr>& f);

struct ConstantSolution {
  bool reducible = false;
  std::vector<std::vector<Rational>> beta;  // n x m
  std::vector<Expr> conditions;             // in beta<i><a>
  std::vector<Expr> residuals;              // nonzero conditions when not reducible
  std::string method;
};
ConstantSolution solve_constant_case(const MongeAmpereSpec& spec, int search_radius = 5);

struct MaReduction {
  PointTransformation map;
  TransformedSystem transformed;
  PdeSystem target;                  // the quasilinear target sum kappa_lin w = 0
  std::vector<Expr> factors;         // transformed_i = factors_i * target_i
  bool matches_target = false;
  ReductionReport report;
};
/// f_i as expressions in u; verifies the constraints first.
MaReduction reduce(const MongeAmpereSpec& spec, const std::vector<Expr>& f);
MaReduction reduce(const MongeAmpereSpec& spec, const std::vector<std::vector<Rational>>& beta);
/// Expected quasilinear target of the family in the target context.
PdeSystem expected_target(const MongeAmpereSpec& spec, const PointTransformation& T);

/// (d/dx_1, ..., d/dx_n, sum (x_i - f_i) d/dx_i).
std::vector<VectorField> general_symmetry_form(const JetContext& ctx, const std::vector<Expr>& f);

/// Surface identity: -4 S^3 (G - kappa H^2) equals the reference second-
/// order equation (S = 1 + w_z1^2 + w_z2^2), and the kappa_10..15
/// specialization of the reduced Example-1 equation equals -1 times it.
struct CurvatureReport {
  bool identity = false;
  bool specialization = false;
  Rational identity_factor;        // -4 (times S^3)
  Rational specialization_factor;  // -1
  Expr cleared;                    // -4 S^3 (G - kappa H^2)
  bool ok() const { return identity && specialization; }
};
CurvatureReport curvature_check(const Expr& kappa);
bool curvature_identity_check(const Expr& kappa);

/// Symbols of the curvature check.
struct SurfaceSymbols {
  Symbol w1, w2, w11, w12, w22;
};
SurfaceSymbols surface_symbols();

}  // namespace liereduce
