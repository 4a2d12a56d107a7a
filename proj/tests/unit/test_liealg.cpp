#include <gtest/gtest.h>

#include <random>

#include "liereduce/linear.hpp"
#include "liereduce/mongeampere.hpp"
#include "liereduce/parse.hpp"
#include "liereduce/reference.hpp"

using namespace liereduce;

namespace {

Symbol S(std::string_view s) { return Symbol::intern(s); }

JetContext ctx22() { return JetContext({S("x1"), S("x2")}, {S("u1"), S("u2")}, {}, {}); }

Expr in(const JetContext& ctx, std::string_view s) { return parse_expr(s, {}, &ctx.functions()); }

/// Random polynomial of degree <= 2 in the coordinates (x, u).
Expr random_poly(const JetContext& ctx, std::mt19937& rng) {
  std::vector<Symbol> coords = ctx.x();
  coords.insert(coords.end(), ctx.u().begin(), ctx.u().end());
  std::uniform_int_distribution<int> coef(-3, 3), pick(0, static_cast<int>(coords.size())), terms(0, 3);
  Expr e;
  for (int t = terms(rng); t > 0; --t) {
    Expr m(coef(rng));
    for (int k = 0; k < 2; ++k) {
      int v = pick(rng);
      if (v < static_cast<int>(coords.size())) m *= Expr(coords[static_cast<std::size_t>(v)]);
    }
    e += m;
  }
  return e;
}

VectorField random_field(const JetContext& ctx, std::mt19937& rng) {
  VectorField X = VectorField::zero(ctx);
  for (auto& c : X.xi) c = random_poly(ctx, rng);
  for (auto& c : X.eta) c = random_poly(ctx, rng);
  return X;
}

/// Jet coordinates x, u, u^(1).
std::vector<Expr> jet_coordinates(const JetContext& ctx) {
  std::vector<Expr> out;
  for (Symbol s : ctx.x()) out.emplace_back(s);
  for (Symbol s : ctx.u()) out.emplace_back(s);
  for (Symbol s : ctx.derivatives()) out.emplace_back(s);
  return out;
}

bool all_zero(const std::vector<std::vector<Expr>>& lambdas) {
  for (const auto& row : lambdas)
    for (const Expr& e : row)
      if (!e.is_zero()) return false;
  return true;
}

/// Example 1 with the nine coefficient conditions solved for k1..k9.
PdeSystem example1_enforced() {
  JetContext ctx = reference::example1_context();
  auto eqs = reference::example1_equations(ctx);
  std::vector<Symbol> ks;
  for (int i = 1; i <= 9; ++i) ks.push_back(S("k" + std::to_string(i)));
  auto sol = solve_linear(reference::example1_conditions(ctx), ks);
  EXPECT_TRUE(sol.consistent);
  Substitution sub;
  for (const auto& [s, v] : sol.solution) sub.emplace(s, v);
  return PdeSystem(ctx, {eqs[0], eqs[1].substitute(sub)});
}

}  // namespace

TEST(Liealg, BracketOfBasicFields) {
  JetContext ctx = ctx22();
  VectorField T1 = VectorField::translation(ctx, 0);
  VectorField D = VectorField::zero(ctx);
  D.xi = {in(ctx, "x1"), in(ctx, "x2")};
  EXPECT_EQ(lie_bracket(ctx, T1, D), T1);
  EXPECT_TRUE(lie_bracket(ctx, T1, VectorField::translation(ctx, 1)).is_zero());
  EXPECT_EQ(to_string(ctx, D), "x1*D[x1] + x2*D[x2]");
}

TEST(LiealgProperty, BracketAxiomsOnRandomTriples) {
  JetContext ctx = ctx22();
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    VectorField X = random_field(ctx, rng), Y = random_field(ctx, rng), Z = random_field(ctx, rng);
    auto br = [&](const VectorField& a, const VectorField& b) { return lie_bracket(ctx, a, b); };
    // Antisymmetry.
    ASSERT_EQ(br(X, Y), br(Y, X).scaled(Expr(-1))) << trial;
    ASSERT_TRUE(br(X, X).is_zero()) << trial;
    // Bilinearity over constants.
    ASSERT_EQ(br(X.scaled(Expr(3)) + Y, Z), br(X, Z).scaled(Expr(3)) + br(Y, Z)) << trial;
    // Jacobi identity.
    VectorField jac = br(X, br(Y, Z)) + br(Y, br(Z, X)) + br(Z, br(X, Y));
    ASSERT_TRUE(jac.is_zero()) << trial;
    // Leibniz rule for functions: [X, gY] = X(g) Y + g [X, Y].
    Expr g = random_poly(ctx, rng);
    ASSERT_EQ(br(X, Y.scaled(g)), Y.scaled(apply_field(ctx, X, g)) + br(X, Y).scaled(g)) << trial;
  }
}

TEST(Liealg, TotalDerivative) {
  JetContext ctx = ctx22();
  EXPECT_EQ(total_derivative(ctx, in(ctx, "x1*u1 + u2^2"), 0), in(ctx, "u1 + x1*d(u1,x1) + 2*u2*d(u2,x1)"));
  EXPECT_EQ(total_derivative(ctx, in(ctx, "x2"), 0), Expr());
  EXPECT_THROW(total_derivative(ctx, in(ctx, "d(u1,x1)"), 0), Error);
}

TEST(Liealg, ProlongationOfScaling) {
  JetContext ctx = ctx22();
  // X = x1 d/dx1: eta1_{a,1} = -u_{a,1}, eta1_{a,2} = 0.
  VectorField X = VectorField::zero(ctx);
  X.xi[0] = in(ctx, "x1");
  ProlongedField P = prolong1(ctx, X);
  EXPECT_EQ(P.eta1[0], in(ctx, "-d(u1,x1)"));
  EXPECT_TRUE(P.eta1[1].is_zero());
  EXPECT_EQ(P.eta1[2], in(ctx, "-d(u2,x1)"));
  // Translations prolong trivially.
  for (const Expr& e : prolong1(ctx, VectorField::translation(ctx, 1)).eta1) EXPECT_TRUE(e.is_zero());
}

TEST(LiealgProperty, ProlongationCommutesWithBracket) {
  // Random fields and the affine symmetry family sum (x_i - f_i(u)) d/dx_i.
  JetContext ctx = ctx22();
  std::mt19937 rng(7);
  std::vector<std::pair<VectorField, VectorField>> pairs;
  for (int trial = 0; trial < 10; ++trial) pairs.emplace_back(random_field(ctx, rng), random_field(ctx, rng));
  std::uniform_int_distribution<int> coef(-4, 4);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Expr> f;
    for (int i = 0; i < 2; ++i) f.push_back(Expr(coef(rng)) * in(ctx, "u1") + Expr(coef(rng)) * in(ctx, "u2"));
    auto fam = general_symmetry_form(ctx, f);
    pairs.emplace_back(fam[2], random_field(ctx, rng));
    pairs.emplace_back(fam[0], fam[2]);
  }
  for (const auto& [X, Y] : pairs) {
    ProlongedField PX = prolong1(ctx, X), PY = prolong1(ctx, Y), PXY = prolong1(ctx, lie_bracket(ctx, X, Y));
    for (const Expr& c : jet_coordinates(ctx)) {
      Expr lhs = apply_prolonged(ctx, PXY, c);
      Expr rhs = apply_prolonged(ctx, PX, apply_prolonged(ctx, PY, c)) -
                 apply_prolonged(ctx, PY, apply_prolonged(ctx, PX, c));
      ASSERT_EQ(lhs, rhs) << c.to_string();
    }
  }
}

TEST(Liealg, ExampleOneSymmetries) {
  PdeSystem sys = example1_enforced();
  const JetContext& ctx = sys.context();
  auto fields = reference::example1_fields(ctx);
  for (std::size_t k = 0; k < fields.size(); ++k) {
    SymmetryResult r = is_symmetry(fields[k], sys);
    EXPECT_EQ(r.verdict, Verdict::yes) << k;
    if (k < 2) EXPECT_TRUE(all_zero(r.multipliers)) << k;  // translations: lambda = 0
  }
  // Without the conditions the scaling field is not certified.
  PdeSystem raw(ctx, reference::example1_equations(ctx));
  EXPECT_NE(is_symmetry(fields[2], raw).verdict, Verdict::yes);
}

TEST(Liealg, TranslationsOfAutonomousSystemsHaveZeroMultipliers) {
  JetContext ctx = ctx22();
  std::vector<PdeSystem> systems{
      PdeSystem(ctx, {in(ctx, "u1*d(u1,x1) + d(u2,x2)"), in(ctx, "d(u1,x2) - u2^2*d(u2,x1)")}),
      PdeSystem(ctx, {in(ctx, "d(u1,x1)*d(u2,x2) - d(u1,x2)*d(u2,x1) - 1")}),
      example1_enforced(),
  };
  for (const PdeSystem& sys : systems) {
    ASSERT_TRUE(is_autonomous(sys));
    for (std::size_t i = 0; i < sys.context().n(); ++i) {
      SymmetryResult r = is_symmetry(VectorField::translation(sys.context(), i), sys);
      EXPECT_EQ(r.verdict, Verdict::yes);
      EXPECT_TRUE(all_zero(r.multipliers));
    }
  }
}

TEST(Liealg, RescalingPreservesVerdict) {
  PdeSystem sys = example1_enforced();
  const JetContext& ctx = sys.context();
  VectorField X3 = reference::example1_fields(ctx)[2];
  EXPECT_EQ(is_symmetry(X3.scaled(Expr(-5)), sys).verdict, Verdict::yes);
  // Rescaling the equations does not change the verdict either.
  PdeSystem scaled(ctx, {sys.equations()[0] * Expr(3), sys.equations()[1] * Expr(Rational(-1, 2))});
  EXPECT_EQ(is_symmetry(X3, scaled).verdict, Verdict::yes);
}

TEST(Liealg, RefutesViolatedConstraint) {
  // a = c = 1, b = 0 with k1 = k12 = 1: the second condition is violated.
  JetContext ctx = ctx22();
  PdeSystem sys(ctx, {in(ctx, "d(u1,x2) - d(u2,x1)"), in(ctx, "d(u1,x2)^4 + d(u1,x1)*d(u2,x2)")});
  VectorField X = VectorField::zero(ctx);
  X.xi = {in(ctx, "x1 - u1"), in(ctx, "x2 - u2")};
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    SymmetryOptions opts;
    opts.seed = seed;
    SymmetryResult r = is_symmetry(X, sys, opts);
    ASSERT_EQ(r.verdict, Verdict::no) << seed;
    // The certificate: a solution-manifold point where pr X (Delta_s) != 0.
    Valuation v;
    for (const auto& [s, val] : r.point) v.set(s, val);
    for (const Expr& e : sys.equations()) EXPECT_EQ(e.evaluate(v), Rational(0));
    Expr image = apply_prolonged(ctx, prolong1(ctx, X), sys.equations()[r.refuted_equation]);
    EXPECT_EQ(image.evaluate(v), r.refuted_value);
    EXPECT_NE(r.refuted_value, 0);
  }
}

TEST(Liealg, MultiplierDegreeOption) {
  PdeSystem sys = example1_enforced();
  VectorField X3 = reference::example1_fields(sys.context())[2];
  SymmetryOptions low;
  low.multiplier_degree = 0;
  EXPECT_NE(is_symmetry(X3, sys, low).verdict, Verdict::yes);
  SymmetryOptions high;
  high.multiplier_degree = 4;
  SymmetryResult r = is_symmetry(X3, sys, high);
  EXPECT_EQ(r.verdict, Verdict::yes);
  EXPECT_EQ(r.degree_used, 4);
  SymmetryOptions bad;
  bad.multiplier_degree = -1;
  EXPECT_THROW(is_symmetry(X3, sys, bad), Error);
}

TEST(Liealg, DistributionRank) {
  JetContext ctx = ctx22();
  VectorField T1 = VectorField::translation(ctx, 0), T2 = VectorField::translation(ctx, 1);
  VectorField U = VectorField::zero(ctx);
  U.xi[0] = in(ctx, "u1");
  EXPECT_EQ(distribution_rank(ctx, {T1, T2}).rank, 2u);
  RankReport r = distribution_rank(ctx, {T1, U});
  EXPECT_EQ(r.rank, 1u);
  EXPECT_TRUE(independent_over_constants(ctx, {T1, U}));
  EXPECT_FALSE(independent_over_constants(ctx, {T1, T1.scaled(Expr(2))}));
  auto c = express_in_span(ctx, T1.scaled(Expr(3)) + T2, {T1, T2});
  ASSERT_TRUE(c);
  EXPECT_EQ((*c)[0], Expr(3));
  EXPECT_FALSE(express_in_span(ctx, U, {T1, T2}));
}

TEST(Liealg, StructureOfExampleOne) {
  JetContext ctx = reference::example1_context();
  auto fields = reference::example1_fields(ctx);
  StructureReport rep = check_reduction_structure(ctx, fields, {in(ctx, "u1"), in(ctx, "u2")});
  EXPECT_TRUE(rep.pass());
  EXPECT_TRUE(rep.brackets_ok);
  EXPECT_TRUE(rep.independent);
  EXPECT_EQ(rep.abelian_rank, 2u);
}

TEST(Liealg, StructureOfGenericThreeByThreeQuadruple) {
  JetContext ctx = ma_context(3, 3);
  std::vector<Expr> f;
  for (int i = 1; i <= 3; ++i) f.emplace_back(S("f" + std::to_string(i)));
  auto fields = general_symmetry_form(ctx, f);
  ASSERT_EQ(fields.size(), 4u);
  std::vector<Expr> w;
  for (Symbol u : ctx.u()) w.emplace_back(u);
  EXPECT_TRUE(check_reduction_structure(ctx, fields, w).pass());
}

TEST(Liealg, StructureCounterexamples) {
  JetContext ctx = ctx22();
  VectorField X1 = VectorField::translation(ctx, 0), X2 = VectorField::translation(ctx, 1);
  VectorField X3 = VectorField::zero(ctx);
  X3.xi = {in(ctx, "x1"), in(ctx, "x2")};
  std::vector<Expr> w{in(ctx, "u1"), in(ctx, "u2")};
  ASSERT_TRUE(check_reduction_structure(ctx, {X1, X2, X3}, w).pass());

  // Wrong bracket: [X1, x1 d/dx2] = d/dx2 != 0.
  VectorField B = VectorField::zero(ctx);
  B.xi[1] = in(ctx, "x1");
  StructureReport wrong = check_reduction_structure(ctx, {X1, B, X3}, w);
  EXPECT_FALSE(wrong.brackets_ok);
  EXPECT_FALSE(wrong.pass());

  // Rank deficiency: 2 X1 in place of X2 keeps every bracket right.
  StructureReport deficient = check_reduction_structure(ctx, {X1, X1.scaled(Expr(2)), X3}, w);
  EXPECT_TRUE(deficient.brackets_ok);
  EXPECT_FALSE(deficient.rank_ok);
  EXPECT_FALSE(deficient.pass());

  // w not invariant: x1 is moved by X1.
  StructureReport moved = check_reduction_structure(ctx, {X1, X2, X3}, {in(ctx, "u1"), in(ctx, "x1")});
  EXPECT_TRUE(moved.brackets_ok);
  EXPECT_FALSE(moved.invariants_ok);
  EXPECT_FALSE(moved.pass());
  ASSERT_FALSE(moved.invariance.empty());
}
