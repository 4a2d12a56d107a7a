#include "liereduce/liealg.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace liereduce {

// ------------------------------------------------------------ VectorField

VectorField VectorField::zero(const JetContext& ctx) { return {std::vector<Expr>(ctx.n()), std::vector<Expr>(ctx.m())}; }

VectorField VectorField::translation(const JetContext& ctx, std::size_t i) {
  VectorField X = zero(ctx);
  X.xi.at(i) = Expr(1);
  return X;
}

bool VectorField::is_zero() const {
  return std::all_of(xi.begin(), xi.end(), [](const Expr& e) { return e.is_zero(); }) &&
         std::all_of(eta.begin(), eta.end(), [](const Expr& e) { return e.is_zero(); });
}

VectorField VectorField::operator+(const VectorField& o) const {
  VectorField r = *this;
  for (std::size_t i = 0; i < xi.size(); ++i) r.xi[i] += o.xi[i];
  for (std::size_t a = 0; a < eta.size(); ++a) r.eta[a] += o.eta[a];
  return r;
}

VectorField VectorField::operator-(const VectorField& o) const { return *this + o.scaled(Expr(-1)); }

VectorField VectorField::scaled(const Expr& c) const {
  VectorField r = *this;
  for (auto& e : r.xi) e *= c;
  for (auto& e : r.eta) e *= c;
  return r;
}

std::string to_string(const JetContext& ctx, const VectorField& X) {
  std::string out;
  auto add = [&](const Expr& c, Symbol v) {
    if (c.is_zero()) return;
    if (!out.empty()) out += " + ";
    std::string cs = c.to_string();
    bool simple = c.is_polynomial() && c.num().size() == 1;
    if (c == Expr(1)) {
      out += "D[" + v.name() + "]";
    } else {
      out += (simple ? cs : "(" + cs + ")") + "*D[" + v.name() + "]";
    }
  };
  for (std::size_t i = 0; i < ctx.n(); ++i) add(X.xi[i], ctx.x()[i]);
  for (std::size_t a = 0; a < ctx.m(); ++a) add(X.eta[a], ctx.u()[a]);
  return out.empty() ? "0" : out;
}

// --------------------------------------------------------------- calculus

Expr apply_field(const JetContext& ctx, const VectorField& X, const Expr& e) {
  const FunctionTable* ft = &ctx.functions();
  Expr r;
  for (std::size_t i = 0; i < ctx.n(); ++i) {
    if (!X.xi[i].is_zero()) r += X.xi[i] * e.diff(ctx.x()[i], ft);
  }
  for (std::size_t a = 0; a < ctx.m(); ++a) {
    if (!X.eta[a].is_zero()) r += X.eta[a] * e.diff(ctx.u()[a], ft);
  }
  return r;
}

VectorField lie_bracket(const JetContext& ctx, const VectorField& X, const VectorField& Y) {
  VectorField r = VectorField::zero(ctx);
  for (std::size_t i = 0; i < ctx.n(); ++i) r.xi[i] = apply_field(ctx, X, Y.xi[i]) - apply_field(ctx, Y, X.xi[i]);
  for (std::size_t a = 0; a < ctx.m(); ++a) r.eta[a] = apply_field(ctx, X, Y.eta[a]) - apply_field(ctx, Y, X.eta[a]);
  return r;
}

Expr total_derivative(const JetContext& ctx, const Expr& e, std::size_t i) {
  for (Symbol s : e.symbols()) {
    if (ctx.is_derivative(s)) throw Error("total derivative of a first-order jet expression needs second-order jets");
  }
  const FunctionTable* ft = &ctx.functions();
  Expr r = e.diff(ctx.x().at(i), ft);
  for (std::size_t a = 0; a < ctx.m(); ++a) {
    Expr d = e.diff(ctx.u()[a], ft);
    if (!d.is_zero()) r += Expr(ctx.deriv(a, i)) * d;
  }
  return r;
}

ProlongedField prolong1(const JetContext& ctx, const VectorField& X) {
  const std::size_t n = ctx.n(), m = ctx.m();
  std::vector<std::vector<Expr>> dxi(n, std::vector<Expr>(n));  // dxi[i][j] = D_i xi_j
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dxi[i][j] = X.xi[j].is_zero() ? Expr() : total_derivative(ctx, X.xi[j], i);
  ProlongedField P{X, {}};
  P.eta1.reserve(m * n);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      Expr e = X.eta[a].is_zero() ? Expr() : total_derivative(ctx, X.eta[a], i);
      for (std::size_t j = 0; j < n; ++j) {
        if (!dxi[i][j].is_zero()) e -= Expr(ctx.deriv(a, j)) * dxi[i][j];
      }
      P.eta1.push_back(e);
    }
  }
  return P;
}

Expr apply_prolonged(const JetContext& ctx, const ProlongedField& P, const Expr& e) {
  Expr r = apply_field(ctx, P.base, e);
  const auto& d = ctx.derivatives();
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (P.eta1[k].is_zero() || !e.contains(d[k])) continue;
    r += P.eta1[k] * e.diff(d[k]);
  }
  return r;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes:
      return "yes";
    case Verdict::no:
      return "no";
    default:
      return "undecided";
  }
}

// --------------------------------------------------------- is_symmetry

namespace {

/// All monomials of total degree <= d in the given symbols, increasing degree.
std::vector<Monomial> monomials_up_to(const std::vector<Symbol>& vars, int d) {
  std::vector<Monomial> out{Monomial{}};
  std::vector<Monomial> layer{Monomial{}};
  // Build layer k+1 from layer k, using a minimal-variable index to avoid duplicates.
  std::vector<std::size_t> last{0};
  for (int k = 1; k <= d; ++k) {
    std::vector<Monomial> next;
    std::vector<std::size_t> next_last;
    for (std::size_t j = 0; j < layer.size(); ++j) {
      for (std::size_t v = last[j]; v < vars.size(); ++v) {
        next.push_back(layer[j] * Monomial::variable(vars[v]));
        next_last.push_back(v);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
    last = std::move(next_last);
  }
  return out;
}

Symbol unknown_symbol(std::size_t k) { return Symbol::intern("lam#" + std::to_string(k)); }

}  // namespace

std::optional<std::vector<Expr>> find_multipliers(const ProlongedField& P, const PdeSystem& sys, std::size_t s, int d,
                                                  std::vector<Expr>* residuals) {
  const JetContext& ctx = sys.context();
  auto is_deriv = [&](std::uint32_t id) { return ctx.is_derivative_id(id); };
  Expr target = apply_prolonged(ctx, P, sys.equations()[s]);
  const std::size_t T = sys.size();
  std::vector<Expr> lambda(T);
  if (target.is_zero()) return lambda;

  auto mus = monomials_up_to(ctx.derivatives(), d);
  std::vector<std::vector<std::pair<Monomial, Poly>>> parts(T);
  for (std::size_t t = 0; t < T; ++t) parts[t] = coefficients_in(sys.equations()[t].num(), is_deriv);

  std::unordered_map<Monomial, std::size_t, MonomialHash> row_of;
  std::vector<LinearRow> rows;
  auto row = [&](const Monomial& nu) -> LinearRow& {
    auto [it, inserted] = row_of.try_emplace(nu, rows.size());
    if (inserted) rows.emplace_back();
    return rows[it->second];
  };
  std::size_t nunk = T * mus.size();
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t k = 0; k < mus.size(); ++k) {
      std::size_t idx = t * mus.size() + k;
      for (const auto& [m, c] : parts[t]) row(mus[k] * m).coeffs.emplace_back(idx, Expr(c));
    }
  }
  for (const auto& [nu, c] : coefficients_in(target.num(), is_deriv)) row(nu).rhs = Expr(c);

  std::vector<Symbol> unknowns;
  unknowns.reserve(nunk);
  for (std::size_t k = 0; k < nunk; ++k) unknowns.push_back(unknown_symbol(k));
  LinearSolution sol = solve_linear_rows(std::move(rows), unknowns);
  if (!sol.consistent) {
    if (residuals) *residuals = sol.residuals;
    return std::nullopt;
  }
  Substitution zero_free;
  for (Symbol f : sol.free) zero_free.emplace(f, Expr());
  std::unordered_map<std::uint32_t, Expr> value;
  for (const auto& [u, e] : sol.solution) value.emplace(u.id(), zero_free.empty() ? e : e.substitute(zero_free));
  Expr qs = Expr(target.den());
  for (std::size_t t = 0; t < T; ++t) {
    Expr l;
    for (std::size_t k = 0; k < mus.size(); ++k) {
      auto it = value.find(unknowns[t * mus.size() + k].id());
      if (it == value.end() || it->second.is_zero()) continue;
      l += it->second * Expr(Poly::monomial(mus[k], 1));
    }
    lambda[t] = l.is_zero() ? l : l * Expr(sys.equations()[t].den()) / qs;
  }
  return lambda;
}

namespace {

struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(std::uint64_t seed) : rng(seed) {}
  Rational value() {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    int n = num(rng);
    if (n == 0) n = 1;
    Rational q(n, den(rng));
    q.canonicalize();
    return q;
  }
};

Expr bind(const Expr& e, const Valuation& v) {
  Substitution s;
  for (Symbol x : e.symbols()) {
    if (v.has(x)) s.emplace(x, Expr(v.get(x)));
  }
  return e.substitute(s);
}

/// Tries to build a jet point where every equation vanishes.
std::optional<Valuation> solution_point(const PdeSystem& sys, const std::vector<Symbol>& all_symbols, Sampler& smp) {
  const JetContext& ctx = sys.context();
  Valuation v;
  // Base point: everything that is neither a derivative nor solvable later
  // gets a value now; derivatives and parameters are kept for solving.
  std::vector<Symbol> solvable;
  for (Symbol s : all_symbols) {
    bool deriv = ctx.is_derivative(s);
    bool coefficient = !deriv && !ctx.indep_index(s) && !ctx.dep_index(s);
    if (deriv || coefficient) {
      solvable.push_back(s);
    } else {
      v.set(s, smp.value());
    }
  }
  // Prefer derivatives as the solved-for variables.
  std::stable_partition(solvable.begin(), solvable.end(), [&](Symbol s) { return ctx.is_derivative(s); });
  for (const Expr& eq : sys.equations()) {
    Expr e = bind(eq, v);
    if (e.is_zero()) continue;
    std::optional<Symbol> pick;
    for (Symbol s : solvable) {
      if (v.has(s) || !e.contains(s)) continue;
      if (e.num().degree(s) == 1 && !e.den().contains(s)) {
        pick = s;
        break;
      }
    }
    if (!pick) return std::nullopt;
    // Fix every other free symbol of the equation, then solve linearly.
    Substitution rest;
    for (Symbol s : e.symbols()) {
      if (s == *pick || v.has(s)) continue;
      Rational r = smp.value();
      v.set(s, r);
      rest.emplace(s, Expr(r));
    }
    Expr lin = e.substitute(rest);
    Expr c1 = lin.diff(*pick);
    if (c1.is_zero() || !c1.is_constant()) return std::nullopt;
    Expr c0 = lin.substitute({{*pick, Expr()}});
    if (!c0.is_constant()) return std::nullopt;
    v.set(*pick, -c0.constant_value() / c1.constant_value());
  }
  for (Symbol s : solvable) {
    if (!v.has(s)) v.set(s, smp.value());
  }
  for (const Expr& eq : sys.equations()) {
    auto val = eq.evaluate(v);
    if (!val || sgn(*val) != 0) return std::nullopt;
  }
  return v;
}

}  // namespace

SymmetryResult is_symmetry(const VectorField& X, const PdeSystem& sys, const SymmetryOptions& opts) {
  if (opts.multiplier_degree && *opts.multiplier_degree < 0) throw Error("negative multiplier degree bound");
  const JetContext& ctx = sys.context();
  ProlongedField P = prolong1(ctx, X);
  SymmetryResult res;

  std::vector<int> degrees;
  if (opts.multiplier_degree) {
    degrees.push_back(*opts.multiplier_degree);
  } else {
    auto deg = degree_in_derivatives(sys);
    int maxn = deg.empty() ? 0 : static_cast<int>(*std::max_element(deg.begin(), deg.end()));
    degrees.push_back(std::max(0, maxn - 1));
    if (maxn > std::max(0, maxn - 1)) degrees.push_back(maxn);
  }
  for (int d : degrees) {
    res.degrees_tried.push_back(d);
    std::vector<std::vector<Expr>> lambdas;
    bool ok = true;
    for (std::size_t s = 0; s < sys.size() && ok; ++s) {
      auto l = find_multipliers(P, sys, s, d);
      if (!l) {
        ok = false;
      } else {
        lambdas.push_back(std::move(*l));
      }
    }
    if (ok) {
      res.verdict = Verdict::yes;
      res.degree_used = d;
      res.multipliers = std::move(lambdas);
      return res;
    }
  }

  // Refutation: a point on the solution manifold with pr^1 X (Delta_s) != 0.
  std::vector<Expr> images;
  for (const Expr& eq : sys.equations()) images.push_back(apply_prolonged(ctx, P, eq));
  std::vector<Symbol> syms;
  {
    std::vector<Symbol> acc;
    for (const std::vector<Expr>* list : {&sys.equations(), static_cast<const std::vector<Expr>*>(&images)})
      for (const Expr& e : *list)
        for (Symbol s : e.symbols()) acc.push_back(s);
    for (Symbol s : ctx.x()) acc.push_back(s);
    for (Symbol s : ctx.u()) acc.push_back(s);
    for (Symbol s : ctx.derivatives()) acc.push_back(s);
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    syms = std::move(acc);
  }
  Sampler smp(opts.seed);
  for (int attempt = 0; attempt < opts.refutation_attempts; ++attempt) {
    auto v = solution_point(sys, syms, smp);
    if (!v) continue;
    for (std::size_t s = 0; s < images.size(); ++s) {
      auto val = images[s].evaluate(*v);
      if (val && sgn(*val) != 0) {
        res.verdict = Verdict::no;
        res.refuted_equation = s;
        res.refuted_value = *val;
        for (Symbol x : syms) res.point.emplace_back(x, v->get(x));
        std::sort(res.point.begin(), res.point.end(),
                  [](const auto& a, const auto& b) { return SymbolNameLess{}(a.first, b.first); });
        return res;
      }
    }
  }
  res.verdict = Verdict::undecided;
  return res;
}

// ------------------------------------------------------ rank and structure

bool is_constant_symbol(const JetContext& ctx, Symbol s) {
  const auto& p = ctx.params();
  return std::find(p.begin(), p.end(), s) != p.end();
}

RankReport distribution_rank(const JetContext& ctx, const std::vector<VectorField>& fields) {
  if (fields.empty()) throw Error("distribution_rank needs at least one field");
  const std::size_t cols = ctx.n() + ctx.m();
  ExprMatrix a(fields.size(), cols);
  for (std::size_t r = 0; r < fields.size(); ++r) {
    for (std::size_t i = 0; i < ctx.n(); ++i) a(r, i) = fields[r].xi[i];
    for (std::size_t k = 0; k < ctx.m(); ++k) a(r, ctx.n() + k) = fields[r].eta[k];
  }
  RankReport rep;
  rep.rank = a.rank();
  rep.pivot_minor = Expr(1);
  if (rep.rank == 0) return rep;
  for (const auto& rs : combinations(fields.size(), rep.rank)) {
    for (const auto& cs : combinations(cols, rep.rank)) {
      Expr d = a.submatrix(rs, cs).det();
      if (!d.is_zero()) {
        rep.pivot_minor = d;
        rep.pivot_rows = rs;
        rep.pivot_cols = cs;
        return rep;
      }
    }
  }
  return rep;
}

namespace {

/// Linear equations in `unknowns` from sum_k c_k F_k = rhs, split by
/// coefficient extraction in the non-constant symbols.
std::vector<Expr> span_equations(const JetContext& ctx, const std::vector<Symbol>& unknowns,
                                 const std::vector<VectorField>& fields, const VectorField* rhs) {
  std::vector<Expr> eqs;
  const std::size_t comps = ctx.n() + ctx.m();
  auto comp = [&](const VectorField& F, std::size_t j) -> const Expr& { return j < ctx.n() ? F.xi[j] : F.eta[j - ctx.n()]; };
  std::unordered_set<std::uint32_t> unknown_ids;
  for (Symbol s : unknowns) unknown_ids.insert(s.id());
  auto variable = [&](std::uint32_t id) {
    return !unknown_ids.contains(id) && !is_constant_symbol(ctx, Symbol::from_id(id));
  };
  for (std::size_t j = 0; j < comps; ++j) {
    Expr e;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (!comp(fields[k], j).is_zero()) e += Expr(unknowns[k]) * comp(fields[k], j);
    }
    if (rhs) e -= comp(*rhs, j);
    if (e.is_zero()) continue;
    for (auto& [m, c] : coefficients_in(e.num(), variable)) eqs.emplace_back(c);
  }
  return eqs;
}

}  // namespace

bool independent_over_constants(const JetContext& ctx, const std::vector<VectorField>& fields) {
  std::vector<Symbol> c;
  for (std::size_t k = 0; k < fields.size(); ++k) c.push_back(Symbol::intern("span#" + std::to_string(k)));
  auto sol = solve_linear(span_equations(ctx, c, fields, nullptr), c);
  return sol.free.empty();
}

std::optional<std::vector<Expr>> express_in_span(const JetContext& ctx, const VectorField& Y,
                                                 const std::vector<VectorField>& fields) {
  std::vector<Symbol> c;
  for (std::size_t k = 0; k < fields.size(); ++k) c.push_back(Symbol::intern("span#" + std::to_string(k)));
  auto sol = solve_linear(span_equations(ctx, c, fields, &Y), c);
  if (!sol.consistent) return std::nullopt;
  auto b = sol.bindings_with_free(Expr());
  std::vector<Expr> out;
  for (Symbol s : c) out.push_back(b.at(s));
  return out;
}

StructureReport check_reduction_structure(const JetContext& ctx, const std::vector<VectorField>& fields,
                                          const std::vector<Expr>& invariants) {
  const std::size_t n = ctx.n();
  if (fields.size() != n + 1) {
    throw Error("check_reduction_structure expects exactly n+1 = " + std::to_string(n + 1) + " fields, got " +
                std::to_string(fields.size()));
  }
  StructureReport rep;
  for (std::size_t a = 0; a < fields.size(); ++a) {
    for (std::size_t b = a + 1; b < fields.size(); ++b) {
      BracketEntry e;
      e.a = a;
      e.b = b;
      e.value = lie_bracket(ctx, fields[a], fields[b]);
      e.combination = express_in_span(ctx, e.value, fields);
      if (b < n) {
        e.expected = "0";
        e.expected_ok = e.value.is_zero();
      } else {
        e.expected = "Xi" + std::to_string(a + 1);
        e.expected_ok = e.value == fields[a];
      }
      rep.brackets_ok = rep.brackets_ok && e.expected_ok;
      rep.brackets.push_back(std::move(e));
    }
  }
  std::vector<VectorField> abelian(fields.begin(), fields.begin() + static_cast<std::ptrdiff_t>(n));
  rep.abelian_rank = distribution_rank(ctx, abelian).rank;
  rep.rank = distribution_rank(ctx, fields);
  rep.independent = independent_over_constants(ctx, fields);
  rep.rank_ok = rep.abelian_rank == n && rep.independent;
  for (std::size_t k = 0; k < invariants.size(); ++k) {
    for (std::size_t a = 0; a < fields.size(); ++a) {
      Expr v = apply_field(ctx, fields[a], invariants[k]);
      if (!v.is_zero()) {
        rep.invariants_ok = false;
        rep.invariance.emplace_back("Xi" + std::to_string(a + 1) + "(w" + std::to_string(k + 1) + ")", v);
      }
    }
  }
  return rep;
}

}  // namespace liereduce
