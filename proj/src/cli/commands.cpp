#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "liereduce/cli.hpp"
#include "liereduce/mongeampere.hpp"

namespace liereduce::cli {

// ---------------------------------------------------------------- Report

void Report::add(const std::string& key, const std::string& value) { entries.emplace_back(key, value); }
void Report::add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
void Report::add(const std::string& key, std::size_t value) { add(key, std::to_string(value)); }
void Report::add(const std::string& key, int value) { add(key, std::to_string(value)); }
void Report::add(const std::string& key, const Expr& value) { add(key, value.to_string()); }
void Report::add(const std::string& key, const Rational& value) { add(key, value.get_str()); }

void Report::check(const std::string& key, bool ok) {
  add(key, ok);
  pass = pass && ok;
}

void Report::append(const std::string& prefix, const Report& other) {
  for (const auto& [k, v] : other.entries) entries.emplace_back(prefix + "." + k, v);
  pass = pass && other.pass;
}

std::optional<std::string> Report::get(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  return std::nullopt;
}

std::string emit(const Report& report, Format format) {
  if (report.entries.empty()) return {};
  const char* sep = format == Format::text ? ": " : "=";
  std::string out;
  for (const auto& [k, v] : report.entries) out += k + sep + v + "\n";
  out += std::string("status") + sep + (report.pass ? "pass" : "fail") + "\n";
  return out;
}

std::uint64_t seed_from_environment() {
  const char* s = std::getenv("LIEREDUCE_SEED");
  if (!s || !*s) return 0;
  std::string text(s);
  if (!std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }) || text.size() > 19)
    throw Error("LIEREDUCE_SEED must be a non-negative integer, got '" + text + "'");
  return std::stoull(text);
}

// ---------------------------------------------------------------- helpers

namespace {

std::string join_numbers(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::string homogeneity_text(const std::optional<std::uint32_t>& h) {
  return h ? std::to_string(*h) : std::string("none");
}

std::vector<std::string> equation_names(const Manifest& m) {
  std::vector<std::string> out;
  for (const auto& e : m.equations) out.push_back(e.name);
  return out;
}

std::string name_or_index(const std::vector<std::string>& names, std::size_t s) {
  return s < names.size() ? names[s] : std::to_string(s + 1);
}

/// Classification entries of a (target) system.
void add_classification(Report& r, const ReductionReport& rep, const std::vector<std::string>& names) {
  for (std::size_t s = 0; s < rep.degrees.size(); ++s) {
    const std::string key = "equation." + name_or_index(names, s);
    r.add(key + ".degree", static_cast<std::size_t>(rep.degrees[s]));
    r.add(key + ".homogeneity", homogeneity_text(rep.homogeneity[s]));
  }
  bool homogeneous = std::all_of(rep.homogeneity.begin(), rep.homogeneity.end(), [](const auto& h) { return h.has_value(); });
  r.add("autonomous", rep.autonomous);
  r.add("quasilinear", rep.quasilinear);
  r.add("homogeneous", homogeneous);
}

void add_jets(Report& r, const JetSampleReport& js) {
  r.add("jets.samples", js.samples);
  r.add("jets.passed", js.passed);
  r.add("jets.skipped", js.skipped);
  if (!js.first_failure.empty()) r.add("jets.first_failure", js.first_failure);
  r.check("jets.ok", js.ok());
}

bool is_rational_table(const MaDecl& d) {
  for (const auto& row : d.table)
    for (const auto& e : row)
      if (!e.is_constant()) return false;
  return true;
}

std::string family(std::size_t m, std::size_t n) { return std::to_string(m) + "x" + std::to_string(n); }

}  // namespace

// ---------------------------------------------------------------- commands

Report classify(const PdeSystem& sys, const std::vector<std::string>& names) {
  Report r;
  r.add("command", "classify");
  r.add("equations", sys.size());
  auto degrees = degree_in_derivatives(sys);
  auto homog = homogeneity_degree(sys);
  std::uint32_t max_degree = 0;
  for (std::size_t s = 0; s < sys.size(); ++s) {
    const std::string key = "equation." + name_or_index(names, s);
    r.add(key, sys.equations()[s]);
    r.add(key + ".degree", static_cast<std::size_t>(degrees[s]));
    r.add(key + ".homogeneity", homogeneity_text(homog[s]));
    max_degree = std::max(max_degree, degrees[s]);
  }
  r.add("degree", static_cast<std::size_t>(max_degree));
  r.add("autonomous", is_autonomous(sys));
  r.add("quasilinear", is_quasilinear(sys));
  r.add("homogeneous", std::all_of(homog.begin(), homog.end(), [](const auto& h) { return h.has_value(); }));
  return r;
}

Report check_symmetry(const Manifest& m, const std::string& field, const RunOptions& options) {
  const FieldDecl* f = m.find_field(field);
  if (!f) throw Error("unresolved reference '" + field + "': no such field");
  PdeSystem sys = m.system();
  const JetContext& ctx = sys.context();
  SymmetryOptions so;
  so.multiplier_degree = options.multiplier_degree;
  so.seed = options.seed;
  SymmetryResult res = is_symmetry(f->field, sys, so);
  auto names = equation_names(m);
  Report r;
  r.add("command", "check-symmetry");
  r.add("field", field);
  r.add("field.value", to_string(ctx, f->field));
  r.add("degrees_tried", join_numbers(res.degrees_tried));
  r.add("verdict", to_string(res.verdict));
  if (res.verdict == Verdict::yes) {
    r.add("multiplier_degree", res.degree_used);
    for (std::size_t s = 0; s < res.multipliers.size(); ++s)
      for (std::size_t t = 0; t < res.multipliers[s].size(); ++t)
        r.add("lambda." + name_or_index(names, s) + "." + name_or_index(names, t), res.multipliers[s][t]);
  } else if (res.verdict == Verdict::no) {
    r.add("refutation.equation", name_or_index(names, res.refuted_equation));
    r.add("refutation.value", res.refuted_value);
    for (const auto& [sym, v] : res.point) r.add("refutation.point." + sym.name(), v);
  }
  r.pass = res.verdict == Verdict::yes;
  return r;
}

Report check_structure(const Manifest& m, const std::vector<std::string>& names) {
  std::vector<VectorField> fields;
  std::vector<std::string> field_names;
  std::vector<Expr> invariants;
  std::vector<std::string> invariant_names;
  for (const auto& n : names) {
    if (const FieldDecl* f = m.find_field(n)) {
      fields.push_back(f->field);
      field_names.push_back(n);
    } else if (const InvariantsDecl* inv = m.find_invariants(n)) {
      invariants.insert(invariants.end(), inv->exprs.begin(), inv->exprs.end());
      for (std::size_t k = 0; k < inv->exprs.size(); ++k) invariant_names.push_back(n + "." + std::to_string(k + 1));
    } else {
      throw Error("unresolved reference '" + n + "': no such field or invariants");
    }
  }
  JetContext ctx = m.context();
  if (fields.size() != ctx.n() + 1)
    throw Error("wrong count of fields: expected " + std::to_string(ctx.n() + 1) + ", got " +
                std::to_string(fields.size()));
  StructureReport rep = check_reduction_structure(ctx, fields, invariants);
  Report r;
  r.add("command", "check-structure");
  std::string list;
  for (std::size_t k = 0; k < field_names.size(); ++k) list += (k ? "," : "") + field_names[k];
  r.add("fields", list);
  for (const auto& b : rep.brackets) {
    const std::string key = "bracket." + field_names[b.a] + "." + field_names[b.b];
    r.add(key, to_string(ctx, b.value));
    std::string expected = b.expected;
    if (expected.rfind("Xi", 0) == 0) expected = field_names[std::stoul(expected.substr(2)) - 1];
    r.add(key + ".expected", expected);
    r.add(key + ".ok", b.expected_ok);
  }
  r.add("brackets_ok", rep.brackets_ok);
  r.add("rank", rep.rank.rank);
  r.add("rank.pivot_minor", rep.rank.pivot_minor);
  r.add("rank.abelian", rep.abelian_rank);
  r.add("independent", rep.independent);
  r.add("rank_ok", rep.rank_ok);
  // Library labels read "Xi<a>(w<k>)"; report them as "<field>(<invariants>.<k>)".
  for (const auto& [label, v] : rep.invariance) {
    const std::size_t open = label.find("(w");
    const std::size_t a = std::stoul(label.substr(2, open - 2)) - 1;
    const std::size_t k = std::stoul(label.substr(open + 2)) - 1;
    r.add("invariance." + field_names[a] + "(" + invariant_names[k] + ")", v);
  }
  r.add("invariants_ok", rep.invariants_ok);
  r.pass = rep.pass();
  return r;
}

PointTransformation build_map(const Manifest& m, const MapDecl& d) {
  JetContext ctx = m.context();
  const std::size_t n = ctx.n();
  switch (d.kind) {
    case MapKind::affine:
      return build_affine(ctx, d.forward, d.z, d.w);
    case MapKind::hodograph:
      return hodograph(ctx, d.z, d.w);
    case MapKind::point: {
      std::vector<Expr> Z(d.forward.begin(), d.forward.begin() + static_cast<std::ptrdiff_t>(n));
      std::vector<Expr> W(d.forward.begin() + static_cast<std::ptrdiff_t>(n), d.forward.end());
      std::vector<Expr> X(d.inverse.begin(), d.inverse.begin() + static_cast<std::ptrdiff_t>(n));
      std::vector<Expr> U(d.inverse.begin() + static_cast<std::ptrdiff_t>(n), d.inverse.end());
      return PointTransformation(ctx, JetContext(d.z, d.w, ctx.params()), Z, W, X, U, "point");
    }
  }
  throw Error("unknown map kind");
}

Report transform(const Manifest& m, const std::string& map, const RunOptions& options) {
  const MapDecl* d = m.find_map(map);
  if (!d) throw Error("unresolved reference '" + map + "': no such map");
  PdeSystem sys = m.system();
  PointTransformation T = build_map(m, *d);
  std::vector<VectorField> fields;
  for (const auto& f : m.fields) fields.push_back(f.field);
  ReductionReport rep = verify_reduction(T, sys, fields);
  auto names = equation_names(m);
  Report r;
  r.add("command", "transform");
  r.add("map", map);
  r.add("map.kind", to_string(d->kind));
  r.add("clearing_factor", rep.transformed.clearing_factor);
  for (std::size_t s = 0; s < rep.transformed.system.size(); ++s) {
    const std::string key = "equation." + name_or_index(names, s);
    r.add(key, rep.transformed.system.equations()[s]);
    r.add(key + ".exponent", static_cast<std::size_t>(rep.transformed.exponents[s]));
  }
  add_classification(r, rep, names);
  for (std::size_t k = 0; k < rep.pushed.size(); ++k)
    r.add("pushforward." + m.fields[k].name, to_string(T.target(), rep.pushed[k]));
  if (!fields.empty()) r.add("symmetries_canonical", rep.symmetries_canonical);
  add_jets(r, jet_sample_check(T, sys, rep.transformed, options.jet_samples, options.seed));
  return r;
}

namespace {

/// Entries shared by every successful Monge–Ampère reduction.
void add_reduction(Report& r, const MongeAmpereSpec& spec, const MaReduction& red, const RunOptions& options) {
  const auto& sys = red.transformed.system;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const std::string key = "target." + std::to_string(i + 1);
    r.add(key, sys.equations()[i]);
    r.add(key + ".exponent", static_cast<std::size_t>(red.transformed.exponents[i]));
    r.add(key + ".factor", red.factors[i]);
  }
  r.check("matches_target", red.matches_target);
  bool degree_one = std::all_of(red.report.homogeneity.begin(), red.report.homogeneity.end(),
                                [](const auto& h) { return h && *h == 1; });
  r.check("autonomous", red.report.autonomous);
  r.check("quasilinear", red.report.quasilinear);
  r.check("homogeneous_degree_1", degree_one);
  r.check("symmetries_canonical", red.report.symmetries_canonical);
  add_jets(r, jet_sample_check(red.map, build_system(spec), red.transformed, options.jet_samples, options.seed));
}

void add_table(Report& r, const std::string& prefix, const std::vector<std::vector<Rational>>& t) {
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t[i].size(); ++j)
      r.add(prefix + "." + std::to_string(i + 1) + "." + std::to_string(j + 1), t[i][j]);
}

}  // namespace

Report reduce_ma(const Manifest& m, const std::string& name, const RunOptions& options) {
  const MaDecl* d = m.find_ma(name);
  if (!d) throw Error("unresolved reference '" + name + "': no such Monge-Ampere spec");
  MongeAmpereSpec spec = make_spec(ma_decl_context(m, d->m, d->n), d->table);
  Report r;
  r.add("command", "reduce-ma");
  r.add("spec", name);
  r.add("family", family(d->m, d->n));
  r.add("equations", spec.kappa.size());
  r.add("coefficients", std::string(is_rational_table(*d) ? "constant" : "functions"));

  // 1. inhomogeneous term.
  ShiftSolution shift = eliminate_inhomogeneity(spec, options.search_radius);
  r.add("shift.method", shift.method);
  r.add("shift.found", shift.found);
  if (!shift.found) {
    // Symbolic tables: the conditions themselves; constant tables: the
    // residuals at the best attempt.
    for (std::size_t k = 0; k < shift.residuals.size(); ++k)
      r.add("shift.residual." + std::to_string(k + 1), shift.residuals[k]);
    r.pass = false;
    return r;
  }
  add_table(r, "alpha", shift.alpha);
  const MongeAmpereSpec& shifted = shift.shifted;

  // 2. symmetry constraints.
  ConstraintSet cs = symmetry_constraints(shifted);
  for (std::size_t i = 0; i < cs.per_equation.size(); ++i)
    for (std::size_t k = 0; k < cs.per_equation[i].size(); ++k)
      r.add("constraint." + std::to_string(i + 1) + "." + std::to_string(k + 1), cs.per_equation[i][k]);

  // 3. f: given, or solved in the constant case.
  if (!d->f.empty()) {
    auto inst = instantiate_f(shifted, cs.all(), d->f);
    bool satisfied = std::all_of(inst.begin(), inst.end(), [](const Expr& e) { return e.is_zero(); });
    r.check("constraints_satisfied", satisfied);
    if (!satisfied) {
      for (std::size_t k = 0; k < inst.size(); ++k)
        if (!inst[k].is_zero()) r.add("constraint_residual." + std::to_string(k + 1), inst[k]);
      return r;
    }
    MaReduction red = reduce(shifted, d->f);
    add_reduction(r, shifted, red, options);
    return r;
  }
  if (!is_constant_spec(shifted)) {
    r.add("reason", "function coefficients: supply f(...) satisfying the constraints");
    r.pass = false;
    return r;
  }
  ConstantSolution sol = solve_constant_case(shifted, options.search_radius);
  r.add("beta.method", sol.method);
  r.add("reducible", sol.reducible);
  if (!sol.reducible) {
    for (std::size_t k = 0; k < sol.residuals.size(); ++k)
      r.add("beta.residual." + std::to_string(k + 1), sol.residuals[k]);
    r.pass = false;
    return r;
  }
  add_table(r, "beta", sol.beta);
  MaReduction red = reduce(shifted, sol.beta);
  add_reduction(r, shifted, red, options);
  return r;
}

Report run_command(const Manifest& m, const std::string& command, const std::vector<std::string>& args,
                   const RunOptions& options) {
  auto need = [&](std::size_t k) {
    if (args.size() != k)
      throw Error("'" + command + "' takes " + std::to_string(k) + " argument" + (k == 1 ? "" : "s") + ", got " +
                  std::to_string(args.size()));
  };
  if (command == "classify") {
    need(0);
    return classify(m.system(), equation_names(m));
  }
  if (command == "check-symmetry") {
    need(1);
    return check_symmetry(m, args[0], options);
  }
  if (command == "check-structure") {
    if (args.empty()) throw Error("'check-structure' needs field names");
    return check_structure(m, args);
  }
  if (command == "transform") {
    need(1);
    return transform(m, args[0], options);
  }
  if (command == "reduce-ma") {
    need(1);
    return reduce_ma(m, args[0], options);
  }
  if (command == "reproduce") {
    need(1);
    return reproduce(args[0], options);
  }
  throw Error("unknown command '" + command + "'");
}

Report run_all(const Manifest& m, const RunOptions& options) {
  Report r;
  for (std::size_t k = 0; k < m.runs.size(); ++k) {
    const RunDecl& run = m.runs[k];
    Report sub = run_command(m, run.command, run.args, options);
    r.append("run." + std::to_string(k + 1), sub);
    r.add("run." + std::to_string(k + 1) + ".status", std::string(sub.pass ? "pass" : "fail"));
  }
  return r;
}

}  // namespace liereduce::cli
