#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "liereduce/cli.hpp"
#include "manifest_generator.hpp"

using namespace liereduce;
using namespace liereduce::cli;
using liereduce::testing::ManifestGenerator;

namespace {

const std::filesystem::path kSource = LIEREDUCE_SOURCE_DIR;

std::vector<std::filesystem::path> corpus() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(kSource / "manifests"))
    if (e.path().extension() == ".lr") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

/// Asserts print(parse(text)) is a fixed point of parse/print.
void expect_round_trip(const std::string& text, const std::string& label) {
  Manifest m1 = parse_manifest(text);
  std::string printed = print_manifest(m1);
  Manifest m2;
  ASSERT_NO_THROW(m2 = parse_manifest(printed)) << label << "\n" << printed;
  EXPECT_TRUE(m1 == m2) << label << "\n" << printed;
  EXPECT_EQ(print_manifest(m2), printed) << label;
}

/// Message and position of the ManifestError raised by `text`.
std::string parse_error(const std::string& text) {
  try {
    (void)parse_manifest(text);
  } catch (const ManifestError& e) {
    return e.what();
  }
  return "<no error>";
}

}  // namespace

TEST(Manifest, TrivialExample) {
  Manifest m = parse_manifest("indep x1 x2; dep u1 u2; param a b c; eq d(u1,x2) - d(u2,x1) = 0;");
  ASSERT_EQ(m.equations.size(), 1u);
  EXPECT_EQ(m.equations[0].name, "e1");
  EXPECT_EQ(m.params.size(), 3u);
  EXPECT_EQ(m.system().size(), 1u);
}

TEST(Manifest, EquationsAreNormalizedToResiduals) {
  Manifest m = parse_manifest("indep x1; dep u1; eq lhs: d(u1,x1) = u1^2 + 1;");
  EXPECT_EQ(m.equations[0].name, "lhs");
  EXPECT_EQ(print_manifest(m), "indep x1;\ndep u1;\neq lhs: -u1^2 + d(u1,x1) - 1 = 0;\n");
}

TEST(Manifest, CorpusRoundTrips) {
  auto files = corpus();
  ASSERT_GE(files.size(), 8u);
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream text;
    text << in.rdbuf();
    expect_round_trip(text.str(), f.filename().string());
  }
}

TEST(ManifestProperty, GeneratedManifestsRoundTrip) {
  int with_maps = 0, with_ma = 0;
  for (std::uint32_t seed = 0; seed < 100; ++seed) {
    std::string text = ManifestGenerator(seed).generate();
    Manifest m;
    ASSERT_NO_THROW(m = parse_manifest(text)) << text;
    with_maps += !m.maps.empty();
    with_ma += !m.ma_specs.empty();
    expect_round_trip(text, "seed " + std::to_string(seed));
  }
  // The generator exercises the optional statements.
  EXPECT_GT(with_maps, 20);
  EXPECT_GT(with_ma, 20);
}

TEST(Manifest, Diagnostics) {
  EXPECT_EQ(parse_error("indep x1 x2; dep u1 u2;\neq d(u1,x1)/d(u2,x2) = 0;"), "2:4: not polynomial in derivatives");
  EXPECT_EQ(parse_error("indep x1 x2; dep u1 u2;\neq d(u1,x1) + v = 0;"), "2:15: undeclared symbol 'v'");
  EXPECT_EQ(parse_error("indep x1 x2; dep u1 u2;\nmap T = affine(u1) -> (z1, z2; w1, w2);"),
            "2:16: arity mismatch: affine map needs 2 entries, got 1");
  EXPECT_EQ(parse_error("indep x1; dep u1;\nfield X = [x1: d(u1,x1)];"),
            parse_error("indep x1; dep u1;\nfield X = [x1: d(u1,x1)];"));
  EXPECT_NE(parse_error("indep x1; dep u1;\nfield X = [x1: d(u1,x1)];").find("2:16"), std::string::npos);
  EXPECT_EQ(parse_error("indep x1 x2 dep u1;"), "1:13: 'dep' is a reserved word (missing ';'?)");
  EXPECT_EQ(parse_error("indep x1; dep u1;\neq d(u1,x1) = 0"), "2:16: expected ';', found end of input");
  EXPECT_EQ(parse_error("indep x1; dep u1;\nrun check-symmetry Y;"), "2:20: unresolved reference 'Y' for 'check-symmetry'");
  EXPECT_EQ(parse_error("indep x1; dep u1;\nrun frobnicate;"), "2:1: unknown command 'frobnicate'");
  EXPECT_EQ(parse_error("indep x1; dep u1;\neq u1 - u1 = 0;"), "2:4: equation is identically zero");
  EXPECT_EQ(parse_error("indep x1; dep u1;\nfn g(x1);"), "2:6: function argument 'x1' is not a dependent variable");
  EXPECT_EQ(parse_error("indep x1; dep u1 x1;"), "1:18: duplicate declaration of 'x1'");
  EXPECT_EQ(parse_error("indep x1; dep u1;\nma S (2, 2) = [[1, 2]];"), "2:16: arity mismatch: kappa row needs 6 entries, got 2");
  EXPECT_EQ(parse_error("indep x1; dep u1;\nwidget W;"),
            "2:1: unknown statement 'widget' (expected one of indep, dep, param, fn, eq, field, invariants, map, ma, run)");
}

TEST(Report, EmitFormats) {
  Report r;
  EXPECT_EQ(emit(r, Format::text), "");
  EXPECT_EQ(emit(r, Format::kv), "");
  r.add("autonomous", true);
  r.add("degree", std::size_t{1});
  r.check("quasilinear", true);
  EXPECT_EQ(emit(r, Format::text), "autonomous: true\ndegree: 1\nquasilinear: true\nstatus: pass\n");
  EXPECT_EQ(emit(r, Format::kv), "autonomous=true\ndegree=1\nquasilinear=true\nstatus=pass\n");
  r.check("homogeneous", false);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.get("degree"), "1");
  Report outer;
  outer.append("run.1", r);
  EXPECT_EQ(outer.get("run.1.autonomous"), "true");
  EXPECT_FALSE(outer.pass);
}

TEST(Commands, ClassifyTargetSystem) {
  Manifest m = load_manifest((kSource / "manifests" / "ma22_target.lr").string());
  Report r = classify(m.system());
  EXPECT_EQ(r.get("autonomous"), "true");
  EXPECT_EQ(r.get("quasilinear"), "true");
  EXPECT_EQ(r.get("degree"), "1");
  EXPECT_TRUE(r.pass);
}

TEST(Commands, CheckStructureReportsOffendingBracket) {
  Manifest m = load_manifest((kSource / "manifests" / "structure_counterexamples.lr").string());
  Report r = check_structure(m, {"X1", "B2", "X3", "W"});
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.get("bracket.X1.B2"), "D[x2]");
  EXPECT_EQ(r.get("bracket.X1.B2.ok"), "false");
  EXPECT_THROW(check_structure(m, {"X1", "X2"}), Error);
}

TEST(Commands, ReduceMaReportsBetaRowMajor) {
  Manifest m = parse_manifest("indep x1 x2; dep u1 u2;\nma S (2, 2) = [[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 0, 0]];");
  Report r = reduce_ma(m, "S", {});
  EXPECT_TRUE(r.pass);
  std::vector<std::string> beta_keys;
  for (const auto& [k, v] : r.entries)
    if (k.rfind("beta.", 0) == 0 && k != "beta.method") beta_keys.push_back(k);
  EXPECT_EQ(beta_keys, (std::vector<std::string>{"beta.1.1", "beta.1.2", "beta.2.1", "beta.2.2"}));
}

TEST(Commands, UnknownCommandAndReferences) {
  Manifest m = parse_manifest("indep x1; dep u1; eq d(u1,x1) = 0;");
  EXPECT_THROW(run_command(m, "frobnicate", {}, {}), Error);
  EXPECT_THROW(run_command(m, "check-symmetry", {"Nope"}, {}), Error);
  EXPECT_THROW(run_command(m, "transform", {"Nope"}, {}), Error);
  EXPECT_THROW(reproduce("no-such-example", {}), Error);
  EXPECT_TRUE(run_all(parse_manifest("indep x1; dep u1;"), {}).entries.empty());
}

TEST(Commands, RecipesAreDeterministic) {
  for (const char* recipe : {"example-1", "curvature", "ma-22", "hodograph"}) {
    RunOptions options;
    options.jet_samples = 20;
    std::string a = emit(reproduce(recipe, options), Format::kv);
    std::string b = emit(reproduce(recipe, options), Format::kv);
    EXPECT_EQ(a, b) << recipe;
    EXPECT_NE(a.find("status=pass"), std::string::npos) << recipe;
  }
}

TEST(Commands, SeedFromEnvironment) {
  unsetenv("LIEREDUCE_SEED");
  EXPECT_EQ(seed_from_environment(), 0u);
  setenv("LIEREDUCE_SEED", "42", 1);
  EXPECT_EQ(seed_from_environment(), 42u);
  setenv("LIEREDUCE_SEED", "4x", 1);
  EXPECT_THROW(seed_from_environment(), Error);
  unsetenv("LIEREDUCE_SEED");
}
