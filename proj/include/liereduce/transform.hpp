#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liereduce/liealg.hpp"

namespace liereduce {

/// Invertible point transformation z = Z(x,u), w = W(x,u) from the source
/// jet context (x,u) to the target jet context (z,w). Function parameters
/// of the source (functions of u) are carried to the target by renaming
/// their arguments through the inverse, which must map each u_a to a
/// coordinate symbol when functions are present.
class PointTransformation {
 public:
  PointTransformation() = default;
  /// `inverse_x`/`inverse_u` give x(z,w), u(z,w). The pair is verified
  /// (Z(x(z,w),u(z,w)) = z and W(...) = w) before use.
  PointTransformation(JetContext source, JetContext target, std::vector<Expr> Z, std::vector<Expr> W,
                      std::vector<Expr> inverse_x, std::vector<Expr> inverse_u, std::string label = {});

  const JetContext& source() const { return source_; }
  const JetContext& target() const { return target_; }
  const std::vector<Expr>& Z() const { return Z_; }
  const std::vector<Expr>& W() const { return W_; }
  const std::vector<Expr>& inverse_x() const { return inv_x_; }
  const std::vector<Expr>& inverse_u() const { return inv_u_; }
  const std::string& label() const { return label_; }
  const ExprMatrix& Zx() const { return Zx_; }
  const ExprMatrix& Zu() const { return Zu_; }
  const ExprMatrix& Wx() const { return Wx_; }
  const ExprMatrix& Wu() const { return Wu_; }

  /// Rewrites a source expression (x, u, params, functions) in target
  /// coordinates (z, w, params, renamed functions). Derivative symbols of
  /// the source are left untouched.
  Expr to_target(const Expr& e) const;
  /// Substitution used by to_target for the symbols of `e`.
  Substitution coordinate_change(const Expr& e) const;
  /// Maps a source function-or-partial symbol to its target counterpart.
  std::optional<Symbol> rename_function_symbol(Symbol s) const;

 private:
  JetContext source_, target_;
  std::vector<Expr> Z_, W_, inv_x_, inv_u_;
  std::string label_;
  ExprMatrix Zx_, Zu_, Wx_, Wu_;
};

/// Source jet variables in terms of target ones: p = M^{-1}(q Z_x - W_x)
/// with M = W_u - q Z_u; expressions in (x, u, q).
struct JetSubstitution {
  std::vector<Expr> p;  // row-major (a, i)
  ExprMatrix M;
  Expr clearing_factor;  // det(M), in (x, u, q)
};
JetSubstitution jet_transform(const PointTransformation& T);

struct TransformedSystem {
  PdeSystem system;                 // in (z, w, q)
  Expr clearing_factor;             // det(M) in target coordinates
  std::vector<unsigned> exponents;  // per equation k_s
};

/// Transforms every equation: E(x,u,p(q)) * det(M)^k, rewritten in (z,w,q),
/// with k the least power making it polynomial in q.
TransformedSystem apply(const PointTransformation& T, const PdeSystem& sys);

/// Push-forward (X(Z_i), X(W_a)) rewritten in target coordinates.
VectorField pushforward_field(const PointTransformation& T, const VectorField& X);

/// z_i = x_i - f_i(u), w_a = u_a (target names z1.., w1.. by default).
PointTransformation build_affine(const JetContext& source, const std::vector<Expr>& f,
                                 const std::vector<Symbol>& z = {}, const std::vector<Symbol>& w = {});
/// n = m = 2 hodograph: z = u, w = x.
PointTransformation hodograph(const JetContext& source, const std::vector<Symbol>& z = {},
                              const std::vector<Symbol>& w = {});
/// T2 after T1 (T2.source must be T1.target).
PointTransformation compose(const PointTransformation& T1, const PointTransformation& T2);

/// Reduces the nonlinear equations modulo the linear ones: each equation of
/// derivative degree one having a derivative with a numeric coefficient
/// is solved for the last such derivative (context order); the solution is
/// substituted into the nonlinear equations and powers of `strip` (after
/// the same substitution) are divided out. Linear equations are kept.
struct ModuloReduction {
  PdeSystem system;
  std::vector<std::pair<Symbol, Expr>> eliminated;
  std::vector<unsigned> stripped;  // per equation power of the factor removed
};
ModuloReduction reduce_modulo_linear(const PdeSystem& sys, const Expr& strip);

/// Result of checking target(z,w,q) = source(x,u,p) * det^k at random points.
struct JetSampleReport {
  std::size_t samples = 0;
  std::size_t passed = 0;
  std::size_t skipped = 0;  // singular points retried
  std::string first_failure;
  bool ok() const { return samples > 0 && passed == samples; }
};
JetSampleReport jet_sample_check(const PointTransformation& T, const PdeSystem& source, const TransformedSystem& target,
                                 std::size_t samples, std::uint64_t seed);

/// Nonzero factor c (free of derivatives) with a = c * b, if any.
std::optional<Expr> proportionality_factor(const JetContext& ctx, const Expr& a, const Expr& b);

struct ReductionReport {
  TransformedSystem transformed;
  bool autonomous = false;
  std::vector<std::optional<std::uint32_t>> homogeneity;
  std::vector<std::uint32_t> degrees;
  bool quasilinear = false;
  std::vector<VectorField> pushed;  // push-forwards of the supplied symmetries
  bool symmetries_canonical = true;  // (d/dz_i, sum z_j d/dz_j)
};
ReductionReport verify_reduction(const PointTransformation& T, const PdeSystem& sys,
                                 const std::vector<VectorField>& symmetries = {});
/// Same classification for an already transformed system.
void classify_into(ReductionReport& rep, const PdeSystem& target);

}  // namespace liereduce
