#pragma once

#include <string>
#include <vector>

#include "liereduce/liealg.hpp"

/// Transcriptions of the reference equations the toolkit reproduces. They are
/// kept verbatim (as DSL expression text) so that generated results can be
/// compared against an independent source.
namespace liereduce::reference {

// ---------------------------------------------------------------- Example 1

/// x1 x2; u1 u2; params a b c; functions k1..k15 of (u1, u2).
JetContext example1_context();
/// The two equations (curl equation and the quartic equation).
std::vector<Expr> example1_equations(const JetContext& ctx);
/// The nine coefficient conditions (left-hand sides).
std::vector<Expr> example1_conditions(const JetContext& ctx);
/// Xi_1, Xi_2, Xi_3.
std::vector<VectorField> example1_fields(const JetContext& ctx);
/// f = (a u1 + b u2, b u1 + c u2).
std::vector<Expr> example1_shift(const JetContext& ctx);
/// Reduced system in the target context (z, w, q).
std::vector<Expr> example1_target(const JetContext& target);
/// k10..k15 in terms of w1, w2 and a curvature function kappa.
std::vector<Expr> kappa_specialization(const Expr& kappa, Symbol w1, Symbol w2);

/// Second-order surface equation with coefficient kappa in symbols
/// (w1, w2, w11, w12, w22) = (w_z1, w_z2, w_z1z1, w_z1z2, w_z2z2).
Expr surface_equation(const Expr& kappa, Symbol w1, Symbol w2, Symbol w11, Symbol w12, Symbol w22);

// ------------------------------------------------------ Monge–Ampère families

/// Equation i (1-based) of the (m, n) family, coefficients k<i>_<label>,
/// parsed in `ctx` (which must declare the coefficient functions).
Expr ma_equation(std::size_t m, std::size_t n, std::size_t i, const JetContext& ctx);
/// Shift conditions for equation i in alpha<a><j> symbols; (3,3) has none
/// printed and returns an empty list.
std::vector<Expr> ma_shift_conditions(std::size_t m, std::size_t n, std::size_t i, const JetContext& ctx);
/// Symmetry conditions for equation i in f-partials d(f<k>,u<a>).
std::vector<Expr> ma_constraints(std::size_t m, std::size_t n, std::size_t i, const JetContext& ctx);
/// Quasilinear target of equation i in the target context.
Expr ma_target(std::size_t m, std::size_t n, std::size_t i, const JetContext& target);

}  // namespace liereduce::reference
