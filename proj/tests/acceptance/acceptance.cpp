// Acceptance runner: one section per acceptance criterion, each with a time
// budget. Prints one line per check and a summary; exits 1 if any check or
// budget fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "liereduce/cli.hpp"
#include "liereduce/linear.hpp"
#include "liereduce/mongeampere.hpp"
#include "liereduce/parse.hpp"
#include "liereduce/reference.hpp"
#include "manifest_generator.hpp"

using namespace liereduce;
using Table = std::vector<std::vector<Rational>>;

namespace {

struct Section {
  std::vector<std::string> failures;
  std::size_t checks = 0;
  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
};

Symbol S(std::string_view s) { return Symbol::intern(s); }
Expr in(const JetContext& ctx, std::string_view s) { return parse_expr(s, {}, &ctx.functions()); }

Table table(std::initializer_list<std::initializer_list<int>> rows) {
  Table out;
  for (const auto& row : rows) {
    out.emplace_back();
    for (int v : row) out.back().emplace_back(v);
  }
  return out;
}

/// Runs a reproduction recipe and records every failed check key.
void recipe_passes(Section& sec, const std::string& recipe) {
  cli::Report r = cli::reproduce(recipe, cli::RunOptions{});
  sec.check(r.pass, recipe + ": report status");
  for (const auto& [k, v] : r.entries)
    if (v == "false") sec.check(false, recipe + ": " + k);
}

void expect_key(Section& sec, const cli::Report& r, const std::string& key, const std::string& value) {
  auto got = r.get(key);
  sec.check(got && *got == value, key + " = " + (got ? *got : "<missing>") + ", expected " + value);
}

PdeSystem example1_enforced() {
  JetContext ctx = reference::example1_context();
  auto eqs = reference::example1_equations(ctx);
  std::vector<Symbol> ks;
  for (int i = 1; i <= 9; ++i) ks.push_back(S("k" + std::to_string(i)));
  auto sol = solve_linear(reference::example1_conditions(ctx), ks);
  return PdeSystem(ctx, {eqs[0], eqs[1].substitute(sol.bindings())});
}

bool all_zero(const std::vector<std::vector<Expr>>& lambdas) {
  for (const auto& row : lambdas)
    for (const Expr& e : row)
      if (!e.is_zero()) return false;
  return true;
}

void jets(Section& sec, const std::string& label, const PointTransformation& T, const PdeSystem& sys,
          const TransformedSystem& ts) {
  JetSampleReport rep = jet_sample_check(T, sys, ts, 100, 0);
  sec.check(rep.ok() && rep.passed == 100, label + ": " + std::to_string(rep.passed) + "/100 jets " + rep.first_failure);
}

// ------------------------------------------------------------------ criteria

void criterion1(Section& sec) {
  recipe_passes(sec, "example-1");
  cli::Report r = cli::reproduce("example-1", cli::RunOptions{});
  for (const char* k : {"symmetry.Xi1.verdict", "symmetry.Xi2.verdict", "symmetry.Xi3.verdict"}) expect_key(sec, r, k, "yes");
  expect_key(sec, r, "target.1.matches", "true");
  expect_key(sec, r, "target.2.matches", "true");
  expect_key(sec, r, "target.degrees", "1,2");
  expect_key(sec, r, "pushforward.canonical", "true");
}

void criterion2(Section& sec) {
  recipe_passes(sec, "curvature");
  CurvatureReport rep = curvature_check(Expr(S("kappa")));
  sec.check(rep.identity && rep.identity_factor == -4, "identity with factor -4 S^3");
  sec.check(rep.specialization && rep.specialization_factor == -1, "specialization with factor -1");
}

void criterion3(Section& sec) {
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}, {3, 2}, {3, 3}}) {
    std::string fam = std::to_string(m) + std::to_string(n);
    MongeAmpereSpec spec = symbolic_spec(m, n, 0, true);
    ConstraintSet cs = symmetry_constraints(spec);
    for (std::size_t i = 0; i < cs.per_equation.size(); ++i)
      sec.check(cs.per_equation[i] == reference::ma_constraints(m, n, i + 1, spec.ctx),
                "ma-" + fam + " constraint set of equation " + std::to_string(i + 1));
    recipe_passes(sec, "ma-" + fam);
  }
}

void criterion4(Section& sec) {
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> entry(-9, 9);
  for (int trial = 0; trial < 50; ++trial) {
    Table t(2, std::vector<Rational>(6));
    for (auto& row : t)
      for (auto& v : row) v = entry(rng);
    std::string label = "table " + std::to_string(trial);
    MongeAmpereSpec spec = constant_spec(2, 2, t);
    ShiftSolution shift = eliminate_inhomogeneity(spec);
    sec.check(shift.found, label + ": shift (" + shift.method + ")");
    if (!shift.found) continue;
    ConstantSolution sol = solve_constant_case(shift.shifted);
    sec.check(sol.reducible, label + ": reducible (" + sol.method + ")");
    if (!sol.reducible) continue;
    MaReduction red = reduce(shift.shifted, sol.beta);
    sec.check(red.matches_target, label + ": target");
    sec.check(red.report.autonomous && red.report.quasilinear, label + ": classification");
    for (auto h : red.report.homogeneity) sec.check(h == 1u, label + ": homogeneous of degree 1");
    JetSampleReport js = jet_sample_check(red.map, build_system(shift.shifted), red.transformed, 20, 0);
    sec.check(js.ok(), label + ": jets " + js.first_failure);
  }
}

void criterion5(Section& sec) {
  {  // Example 1 affine map.
    PdeSystem sys = example1_enforced();
    PointTransformation T = build_affine(sys.context(), reference::example1_shift(sys.context()));
    jets(sec, "example-1 affine", T, sys, apply(T, sys));
    PointTransformation H = hodograph(sys.context());
    jets(sec, "example-1 hodograph", H, sys, apply(H, sys));
  }
  {  // Hodograph on a quasilinear system with coefficient functions.
    FunctionTable ft;
    ft.declare(S("p"), {S("u1"), S("u2")});
    ft.declare(S("q"), {S("u1"), S("u2")});
    JetContext ctx({S("x1"), S("x2")}, {S("u1"), S("u2")}, {}, ft);
    PdeSystem sys(ctx, {in(ctx, "p*d(u1,x1) + d(u2,x2)"), in(ctx, "d(u1,x2) - q*d(u2,x1)")});
    PointTransformation H = hodograph(ctx);
    jets(sec, "hodograph", H, sys, apply(H, sys));
  }
  {  // Point shear with explicit inverse.
    JetContext src({S("x1"), S("x2")}, {S("u1"), S("u2")}, {S("c")}, {});
    JetContext tgt({S("z1"), S("z2")}, {S("w1"), S("w2")}, src.params(), {});
    PointTransformation T(src, tgt, {in(src, "x1"), in(src, "x2")}, {in(src, "u1 + x1"), in(src, "u2")},
                          {in(tgt, "z1"), in(tgt, "z2")}, {in(tgt, "w1 - z1"), in(tgt, "w2")}, "shear");
    PdeSystem sys(src, {in(src, "d(u1,x2) + u1*d(u1,x1) - d(u2,x1)"), in(src, "d(u2,x2) - c*d(u1,x1)")});
    jets(sec, "point shear", T, sys, apply(T, sys));
  }
  // Monge–Ampère reductions, one constant instance per family.
  const std::vector<std::tuple<std::size_t, std::size_t, Table>> cases{
      {2, 2, table({{0, 1, 0, 0, 0, -3}, {0, 0, 0, 0, 1, 0}})},
      {2, 3, table({{1, 0, 0, 0, 0, 0, 0, 1, 0, 2}, {0, 1, 0, 0, 0, 0, 0, 0, 1, 0}})},
      {3, 2, table({{1, 0, 0, 0, 0, 0, 1, 0, 0, 2}, {0, 1, 0, 0, 0, 0, 0, 0, 1, 0}, {0, 0, 0, 0, 1, 0, 0, 0, 0, 0}})},
      {3, 3, table({{2, 0, 0, 0, 0, 0, -2, 0, 1, -1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0},
                    {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0},
                    {0, 0, 0, -2, 0, -1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0}})},
  };
  for (const auto& [m, n, t] : cases) {
    std::string label = "ma-" + std::to_string(m) + std::to_string(n);
    ShiftSolution shift = eliminate_inhomogeneity(constant_spec(m, n, t));
    ConstantSolution sol = solve_constant_case(shift.shifted);
    sec.check(shift.found && sol.reducible, label + ": reducible");
    if (!shift.found || !sol.reducible) continue;
    MaReduction red = reduce(shift.shifted, sol.beta);
    jets(sec, label, red.map, build_system(shift.shifted), red.transformed);
  }
}

void criterion6(Section& sec) {
  JetContext ex = reference::example1_context();
  sec.check(check_reduction_structure(ex, reference::example1_fields(ex), {in(ex, "u1"), in(ex, "u2")}).pass(),
            "Example 1 triple");
  JetContext c3 = ma_context(3, 3);
  std::vector<Expr> f, w;
  for (int i = 1; i <= 3; ++i) f.emplace_back(S("f" + std::to_string(i)));
  for (Symbol u : c3.u()) w.emplace_back(u);
  sec.check(check_reduction_structure(c3, general_symmetry_form(c3, f), w).pass(), "(3,3) quadruple");

  JetContext ctx({S("x1"), S("x2")}, {S("u1"), S("u2")}, {}, {});
  VectorField X1 = VectorField::translation(ctx, 0), X2 = VectorField::translation(ctx, 1);
  VectorField X3 = VectorField::zero(ctx);
  X3.xi = {in(ctx, "x1"), in(ctx, "x2")};
  VectorField B = VectorField::zero(ctx);
  B.xi[1] = in(ctx, "x1");
  std::vector<Expr> uw{in(ctx, "u1"), in(ctx, "u2")};
  StructureReport wrong = check_reduction_structure(ctx, {X1, B, X3}, uw);
  sec.check(!wrong.pass() && !wrong.brackets_ok, "counterexample: wrong bracket fails");
  StructureReport deficient = check_reduction_structure(ctx, {X1, X1.scaled(Expr(2)), X3}, uw);
  sec.check(!deficient.pass() && !deficient.rank_ok, "counterexample: rank deficiency fails");
  StructureReport moved = check_reduction_structure(ctx, {X1, X2, X3}, {in(ctx, "u1"), in(ctx, "x1")});
  sec.check(!moved.pass() && !moved.invariants_ok, "counterexample: non-invariant w fails");
}

void criterion7(Section& sec) {
  PdeSystem sys = example1_enforced();
  const JetContext& ctx = sys.context();
  auto fields = reference::example1_fields(ctx);
  sec.check(is_symmetry(fields[2], sys).verdict == Verdict::yes, "Xi3 certified");
  for (std::size_t i = 0; i < 2; ++i) {
    SymmetryResult r = is_symmetry(fields[i], sys);
    sec.check(r.verdict == Verdict::yes && all_zero(r.multipliers), "translation " + std::to_string(i + 1) + " with lambda = 0");
  }
  JetContext c22({S("x1"), S("x2")}, {S("u1"), S("u2")}, {}, {});
  PdeSystem bad(c22, {in(c22, "d(u1,x2) - d(u2,x1)"), in(c22, "d(u1,x2)^4 + d(u1,x1)*d(u2,x2)")});
  VectorField X = VectorField::zero(c22);
  X.xi = {in(c22, "x1 - u1"), in(c22, "x2 - u2")};
  SymmetryResult r = is_symmetry(X, bad);
  sec.check(r.verdict == Verdict::no, "violated instance refuted");
  if (r.verdict == Verdict::no) {
    Valuation v;
    for (const auto& [s, val] : r.point) v.set(s, val);
    bool on_manifold = true;
    for (const Expr& e : bad.equations()) on_manifold = on_manifold && e.evaluate(v) == Rational(0);
    auto image = apply_prolonged(c22, prolong1(c22, X), bad.equations()[r.refuted_equation]).evaluate(v);
    sec.check(on_manifold && image && *image != 0, "refutation certificate verifies");
  }
}

/// Random polynomial of degree <= 2 in x, y, u.
Expr random_poly(std::mt19937& rng) {
  const std::vector<Symbol> vars{S("x"), S("y"), S("u")};
  std::uniform_int_distribution<int> coef(-3, 3), pick(0, 3), terms(1, 3);
  Expr e;
  for (int t = terms(rng); t > 0; --t) {
    Expr m(coef(rng));
    for (int k = 0; k < 2; ++k)
      if (int v = pick(rng); v < 3) m *= Expr(vars[static_cast<std::size_t>(v)]);
    e += m;
  }
  return e;
}

void criterion8(Section& sec) {
  JetContext ctx({S("x1"), S("x2")}, {S("u1"), S("u2")}, {}, {});
  std::mt19937 rng(2024);
  auto poly = [&] {
    std::vector<Symbol> coords{S("x1"), S("x2"), S("u1"), S("u2")};
    std::uniform_int_distribution<int> coef(-3, 3), pick(0, 4), terms(0, 3);
    Expr e;
    for (int t = terms(rng); t > 0; --t) {
      Expr m(coef(rng));
      for (int k = 0; k < 2; ++k)
        if (int v = pick(rng); v < 4) m *= Expr(coords[static_cast<std::size_t>(v)]);
      e += m;
    }
    return e;
  };
  auto field = [&] {
    VectorField X = VectorField::zero(ctx);
    for (auto& c : X.xi) c = poly();
    for (auto& c : X.eta) c = poly();
    return X;
  };
  auto br = [&](const VectorField& a, const VectorField& b) { return lie_bracket(ctx, a, b); };

  // Bracket axioms on 30 random triples.
  bool axioms = true;
  for (int t = 0; t < 30; ++t) {
    VectorField X = field(), Y = field(), Z = field();
    Expr g = poly();
    axioms = axioms && br(X, Y) == br(Y, X).scaled(Expr(-1)) &&
             br(X.scaled(Expr(3)) + Y, Z) == br(X, Z).scaled(Expr(3)) + br(Y, Z) &&
             (br(X, br(Y, Z)) + br(Y, br(Z, X)) + br(Z, br(X, Y))).is_zero() &&
             br(X, Y.scaled(g)) == Y.scaled(apply_field(ctx, X, g)) + br(X, Y).scaled(g);
  }
  sec.check(axioms, "bracket axioms on 30 triples");

  // Prolongation-bracket compatibility on every first-order jet coordinate.
  std::vector<Expr> coords;
  for (Symbol s : ctx.x()) coords.emplace_back(s);
  for (Symbol s : ctx.u()) coords.emplace_back(s);
  for (Symbol s : ctx.derivatives()) coords.emplace_back(s);
  bool compat = true;
  for (int t = 0; t < 20; ++t) {
    VectorField X = field(), Y = field();
    if (t % 2) X = general_symmetry_form(ctx, {poly(), poly()})[2];
    ProlongedField PX = prolong1(ctx, X), PY = prolong1(ctx, Y), PXY = prolong1(ctx, br(X, Y));
    for (const Expr& c : coords)
      compat = compat && apply_prolonged(ctx, PXY, c) == apply_prolonged(ctx, PX, apply_prolonged(ctx, PY, c)) -
                                                            apply_prolonged(ctx, PY, apply_prolonged(ctx, PX, c));
  }
  sec.check(compat, "prolongation-bracket compatibility");

  // Normalization idempotence: common factors cancel, canonical form is a
  // fixed point of normalize and of print/parse.
  std::mt19937 erng(8);
  bool idem = true;
  for (int t = 0; t < 50; ++t) {
    Expr a = random_poly(erng), b = random_poly(erng), g = random_poly(erng);
    if (b.is_zero() || g.is_zero()) continue;
    Expr e = Expr::fraction((a * g).num(), (b * g).num());
    idem = idem && e == a / b && normalize(normalize(e)) == normalize(e) && parse_expr(e.to_string()) == e &&
           parse_expr(e.to_string()).to_string() == e.to_string();
  }
  sec.check(idem, "normalization idempotence");

  // Parser round trip: corpus and 100 generated manifests.
  auto round_trip = [&](const std::string& text, const std::string& label) {
    try {
      cli::Manifest m1 = cli::parse_manifest(text);
      std::string printed = cli::print_manifest(m1);
      cli::Manifest m2 = cli::parse_manifest(printed);
      sec.check(m1 == m2 && cli::print_manifest(m2) == printed, "round trip " + label);
    } catch (const std::exception& e) {
      sec.check(false, "round trip " + label + ": " + e.what());
    }
  };
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(std::filesystem::path(LIEREDUCE_SOURCE_DIR) / "manifests")) {
    if (entry.path().extension() != ".lr") continue;
    std::ifstream in(entry.path());
    std::stringstream ss;
    ss << in.rdbuf();
    round_trip(ss.str(), entry.path().filename().string());
    ++files;
  }
  sec.check(files > 0, "corpus is non-empty");
  for (std::uint32_t seed = 0; seed < 100; ++seed)
    round_trip(liereduce::testing::ManifestGenerator(seed).generate(), "generated " + std::to_string(seed));
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<void(Section&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Example 1 reproduction", 10, criterion1},
      {2, "curvature identity", 10, criterion2},
      {3, "Monge-Ampere constraint sets and targets", 60, criterion3},
      {4, "50 random (2,2) constant tables", 60, criterion4},
      {5, "100 jet samples per transformation", 120, criterion5},
      {6, "structure check", 60, criterion6},
      {7, "symmetry certification and refutation", 60, criterion7},
      {8, "property suites", 600, criterion8},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Section sec;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(sec);
    } catch (const std::exception& e) {
      sec.check(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs <= c.budget_s;
    bool ok = sec.failures.empty() && in_time;
    std::printf("criterion %d (%s): %s  [%zu checks, %.2f s, budget %.0f s]\n", c.id, c.name, ok ? "PASS" : "FAIL",
                sec.checks, secs, c.budget_s);
    for (const auto& f : sec.failures) std::printf("  failed: %s\n", f.c_str());
    if (!in_time) std::printf("  failed: over time budget\n");
    if (!ok) ++failed;
  }
  std::printf("%s: %d of %zu criteria failed\n", failed ? "FAIL" : "PASS", failed, criteria.size());
  return failed ? 1 : 0;
}
