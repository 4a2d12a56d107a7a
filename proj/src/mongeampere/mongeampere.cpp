#include "liereduce/mongeampere.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <unordered_set>

#include "liereduce/reference.hpp"

namespace liereduce {

namespace {

Symbol sym(const std::string& s) { return Symbol::intern(s); }

std::string idx(std::size_t a, std::size_t b) { return std::to_string(a) + std::to_string(b); }

/// Total degree of the numerator in the given symbols.
unsigned degree_in(const Expr& e, const std::unordered_set<std::uint32_t>& ids) {
  unsigned d = 0;
  for (const auto& [mono, coeff] : coefficients_in(e.num(), [&](std::uint32_t id) { return ids.count(id) > 0; })) {
    (void)coeff;
    d = std::max<unsigned>(d, mono.degree());
  }
  return d;
}

std::unordered_set<std::uint32_t> id_set(const std::vector<Symbol>& syms) {
  std::unordered_set<std::uint32_t> out;
  for (Symbol s : syms) out.insert(s.id());
  return out;
}

/// Degree-D homogeneous part (in the derivatives) of e.
Expr degree_part(const JetContext& ctx, const Expr& e, unsigned D) {
  Expr out;
  for (const auto& t : decompose_equation(ctx, e)) {
    if (t.degree() == D) out += t.coefficient * Expr(Poly::monomial(t.derivatives, 1));
  }
  return out;
}

/// Monomials of total degree g in the given symbols (combinations with
/// repetition, in index order).
std::vector<Expr> monomials_of_degree(const std::vector<Symbol>& vars, unsigned g) {
  std::vector<Expr> out;
  std::vector<std::size_t> pick(g, 0);
  if (g == 0) return {Expr(1)};
  for (;;) {
    Expr mono(1);
    for (std::size_t k : pick) mono *= Expr(vars[k]);
    out.push_back(mono);
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(g) - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == vars.size() - 1) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < g; ++j) pick[j] = pick[j - 1];
  }
  return out;
}

/// Coefficient equations (one per derivative monomial) of e = 0.
std::vector<Expr> coefficient_equations(const JetContext& ctx, const Expr& e) {
  std::vector<Expr> out;
  if (e.is_zero()) return out;
  for (const auto& t : decompose_equation(ctx, e)) out.push_back(t.coefficient);
  return out;
}

/// Normalizes a condition so that the coefficient of `pivot` is 1.
Expr normalize_pivot(const Expr& cond, Symbol pivot) {
  Expr c = cond.diff(pivot);
  if (c.is_zero()) return cond;
  return cond / c;
}

/// Leading-coefficient normalization for conditions without a pivot.
Expr normalize_monic(const Expr& cond) {
  if (cond.is_zero()) return cond;
  Rational lc = cond.num().leading().coeff;
  return cond / Expr(lc);
}

// ---------------------------------------------------------------- search

/// Small rationals ordered by height max(|num|, den), then denominator,
/// then |num|, positive first: 0, 1, -1, 2, -2, 1/2, -1/2, 3, ...
std::vector<Rational> rational_grid(int radius) {
  std::vector<Rational> out;
  for (int num = -radius; num <= radius; ++num) {
    for (int den = 1; den <= std::max(radius, 1); ++den) {
      if (std::gcd(num, den) != 1 && num != 0) continue;
      if (num == 0 && den != 1) continue;
      out.emplace_back(num, den);
    }
  }
  auto height = [](const Rational& q) {
    mpz_class a = abs(q.get_num()), d = q.get_den();
    return a > d ? a : d;
  };
  std::sort(out.begin(), out.end(), [&](const Rational& a, const Rational& b) {
    auto ha = height(a), hb = height(b);
    if (ha != hb) return ha < hb;
    if (a.get_den() != b.get_den()) return a.get_den() < b.get_den();
    if (abs(a.get_num()) != abs(b.get_num())) return abs(a.get_num()) < abs(b.get_num());
    return a > b;
  });
  return out;
}

struct SearchResult {
  bool found = false;
  std::vector<Rational> values;
  std::vector<Expr> residuals;
  std::string method;
};

bool all_zero(const std::vector<Expr>& eqs, const Substitution& sub) {
  for (const Expr& e : eqs)
    if (!e.substitute(sub).is_zero()) return false;
  return true;
}

/// Solves polynomial equations over small rationals: the equations of degree
/// one in the unknowns are solved exactly first; the remaining free unknowns
/// are searched over the rational grid (ordered by height), leaving one
/// unknown to be solved from an equation linear in it. Every candidate is
/// verified by substitution.
SearchResult solve_bounded(const std::vector<Expr>& eqs, const std::vector<Symbol>& unknowns, int radius,
                           std::size_t budget = 60000) {
  SearchResult res;
  auto ids = id_set(unknowns);
  std::vector<Expr> linear, nonlinear;
  for (const Expr& e : eqs) {
    if (e.is_zero()) continue;
    (degree_in(e, ids) <= 1 ? linear : nonlinear).push_back(e);
  }
  LinearSolution lin = solve_linear(linear, unknowns);
  if (!lin.consistent) {
    res.residuals = lin.residuals;
    res.method = "linear part inconsistent";
    return res;
  }
  Substitution bind = lin.bindings();
  std::vector<Expr> rest;
  for (const Expr& e : nonlinear) {
    Expr r = e.substitute(bind);
    if (!r.is_zero()) rest.push_back(r);
  }
  const std::vector<Symbol>& free = lin.free;
  auto finish = [&](const Substitution& free_values, const std::string& method) {
    Substitution all;
    for (const auto& [s, v] : bind) all[s] = v.substitute(free_values);
    for (const auto& [s, v] : free_values) all[s] = v;
    for (Symbol u : unknowns)
      if (!all.count(u)) all[u] = Expr(0);
    if (!all_zero(eqs, all)) return false;
    res.found = true;
    res.values.clear();
    for (Symbol u : unknowns) res.values.push_back(all[u].constant_value());
    res.method = method;
    return true;
  };
  Substitution zeros;
  for (Symbol s : free) zeros[s] = Expr(0);
  if (finish(zeros, rest.empty() ? "linear" : "linear+zero")) return res;
  if (free.empty()) {
    for (const Expr& e : rest) res.residuals.push_back(e);
    res.method = "no free unknowns";
    return res;
  }
  // Unknown solved last: degree one in most remaining equations.
  std::size_t best = 0;
  int best_count = -1;
  for (std::size_t k = 0; k < free.size(); ++k) {
    int count = 0;
    for (const Expr& e : rest)
      if (e.num().degree(free[k]) == 1) ++count;
    if (count > best_count) {
      best_count = count;
      best = k;
    }
  }
  Symbol v = free[best];
  std::vector<Symbol> others;
  for (std::size_t k = 0; k < free.size(); ++k)
    if (k != best) others.push_back(free[k]);
  const auto grid = rational_grid(radius);
  std::size_t evaluations = 0;

  auto try_assignment = [&](const Substitution& partial) -> bool {
    ++evaluations;
    std::vector<Expr> uni;
    for (const Expr& e : rest) {
      Expr r = e.substitute(partial);
      if (!r.is_zero()) uni.push_back(r);
    }
    Substitution full = partial;
    if (uni.empty()) {
      full[v] = Expr(0);
      return finish(full, "search");
    }
    for (const Expr& e : uni) {
      if (e.num().degree(v) == 1) {
        Expr c1 = e.diff(v);
        Expr val = -(e - c1 * Expr(v)) / c1;
        if (!val.is_constant()) continue;
        full[v] = val;
        return finish(full, "search");
      }
    }
    for (const Rational& q : grid) {
      ++evaluations;
      full[v] = Expr(q);
      if (finish(full, "search")) return true;
    }
    return false;
  };

  // Tuples over `others` in order of the maximum grid index.
  const std::size_t k = others.size();
  std::vector<std::size_t> t(k, 0);
  for (std::size_t level = 0; level < grid.size() && evaluations < budget; ++level) {
    if (k == 0) {
      if (try_assignment({})) return res;
      break;
    }
    std::fill(t.begin(), t.end(), 0);
    for (;;) {
      bool at_level = std::any_of(t.begin(), t.end(), [&](std::size_t x) { return x == level; });
      if (at_level) {
        Substitution partial;
        for (std::size_t j = 0; j < k; ++j) partial[others[j]] = Expr(grid[t[j]]);
        if (try_assignment(partial)) return res;
        if (evaluations >= budget) break;
      }
      std::size_t j = 0;
      while (j < k && t[j] == level) t[j++] = 0;
      if (j == k) break;
      ++t[j];
    }
  }
  for (const Expr& e : rest) res.residuals.push_back(e.substitute(zeros));
  res.method = "search exhausted";
  return res;
}

}  // namespace

// ------------------------------------------------------------------ specs

JetContext ma_context(std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) throw Error("Monge-Ampere family needs m, n >= 1");
  std::vector<Symbol> x, u;
  for (std::size_t i = 1; i <= n; ++i) x.push_back(sym("x" + std::to_string(i)));
  for (std::size_t a = 1; a <= m; ++a) u.push_back(sym("u" + std::to_string(a)));
  FunctionTable ft;
  for (std::size_t i = 1; i <= n; ++i) ft.declare(sym("f" + std::to_string(i)), u);
  return JetContext(x, u, {}, ft);
}

std::vector<Expr> ma_terms(const JetContext& ctx, std::vector<unsigned>* degrees) {
  std::vector<Expr> out;
  std::vector<unsigned> deg;
  const std::size_t top = std::min(ctx.m(), ctx.n());
  for (std::size_t order = top; order >= 2; --order) {
    for (Expr& e : gradient_minors(ctx, order)) {
      out.push_back(std::move(e));
      deg.push_back(static_cast<unsigned>(order));
    }
  }
  for (Symbol d : ctx.derivatives()) {
    out.emplace_back(d);
    deg.push_back(1);
  }
  out.emplace_back(1);
  deg.push_back(0);
  if (degrees) *degrees = std::move(deg);
  return out;
}

std::size_t ma_table_width(std::size_t m, std::size_t n) {
  std::size_t width = m * n + 1;
  const std::size_t top = std::min(m, n);
  auto choose = [](std::size_t a, std::size_t b) {
    std::size_t r = 1;
    for (std::size_t k = 1; k <= b; ++k) r = r * (a - b + k) / k;
    return r;
  };
  for (std::size_t order = 2; order <= top; ++order) width += choose(m, order) * choose(n, order);
  return width;
}

const Expr& MongeAmpereSpec::at(std::size_t i, std::size_t label) const {
  if (i < 1 || i > kappa.size() || label < base() || label - base() >= kappa[i - 1].size()) {
    throw Error("coefficient index out of range");
  }
  return kappa[i - 1][label - base()];
}

std::vector<Symbol> MongeAmpereSpec::f_symbols() const {
  std::vector<Symbol> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(sym("f" + std::to_string(i)));
  return out;
}

MongeAmpereSpec make_spec(JetContext ctx, std::vector<std::vector<Expr>> table) {
  MongeAmpereSpec spec;
  spec.m = ctx.m();
  spec.n = ctx.n();
  const std::size_t width = ma_table_width(spec.m, spec.n);
  if (table.empty()) throw Error("malformed table: no equations");
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].size() != width) {
      throw Error("malformed table: equation " + std::to_string(i + 1) + " has " + std::to_string(table[i].size()) +
                  " coefficients, expected " + std::to_string(width));
    }
    for (const Expr& e : table[i]) {
      for (Symbol s : e.symbols()) {
        if (ctx.is_derivative(s) || ctx.indep_index(s)) {
          throw Error("malformed table: coefficients may depend on u only (found '" + s.name() + "')");
        }
      }
    }
  }
  for (Symbol f : spec.f_symbols())
    if (!ctx.functions().declared(f)) ctx.add_function(f, ctx.u());
  spec.ctx = std::move(ctx);
  spec.kappa = std::move(table);
  return spec;
}

MongeAmpereSpec constant_spec(std::size_t m, std::size_t n, const std::vector<std::vector<Rational>>& table) {
  std::vector<std::vector<Expr>> rows;
  for (const auto& r : table) {
    std::vector<Expr> row;
    for (const auto& q : r) row.emplace_back(q);
    rows.push_back(std::move(row));
  }
  return make_spec(ma_context(m, n), std::move(rows));
}

MongeAmpereSpec symbolic_spec(std::size_t m, std::size_t n, std::size_t equations, bool homogeneous) {
  if (equations == 0) equations = m;
  JetContext ctx = ma_context(m, n);
  const std::size_t width = ma_table_width(m, n), base = m == n ? 0 : 1;
  std::vector<std::vector<Expr>> rows;
  for (std::size_t i = 1; i <= equations; ++i) {
    std::vector<Expr> row;
    for (std::size_t j = 0; j < width; ++j) {
      if (homogeneous && j + 1 == width) {
        row.emplace_back(0);
        continue;
      }
      Symbol k = sym("k" + std::to_string(i) + "_" + std::to_string(j + base));
      ctx.add_function(k, ctx.u());
      row.emplace_back(k);
    }
    rows.push_back(std::move(row));
  }
  return make_spec(std::move(ctx), std::move(rows));
}

bool is_constant_spec(const MongeAmpereSpec& spec) {
  for (const auto& row : spec.kappa)
    for (const Expr& e : row)
      if (!e.is_constant()) return false;
  return true;
}

PdeSystem build_system(const MongeAmpereSpec& spec) {
  auto terms = ma_terms(spec.ctx);
  std::vector<Expr> eqs;
  for (const auto& row : spec.kappa) {
    if (row.size() != terms.size()) throw Error("malformed table");
    Expr e;
    for (std::size_t j = 0; j < terms.size(); ++j)
      if (!row[j].is_zero()) e += row[j] * terms[j];
    eqs.push_back(e);
  }
  return PdeSystem(spec.ctx, std::move(eqs));
}

// ---------------------------------------------------------------- shifting

namespace {

std::vector<std::vector<Symbol>> alpha_symbols(std::size_t m, std::size_t n) {
  std::vector<std::vector<Symbol>> out(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t i = 0; i < n; ++i) out[a].push_back(sym("alpha" + idx(a + 1, i + 1)));
  return out;
}

/// Delta_i(p -> p + shift), for each row.
std::vector<Expr> shifted_equations(const MongeAmpereSpec& spec, const std::vector<std::vector<Expr>>& shift,
                                    bool keep_p) {
  auto terms = ma_terms(spec.ctx);
  Substitution sub;
  for (std::size_t a = 0; a < spec.m; ++a)
    for (std::size_t i = 0; i < spec.n; ++i) {
      Symbol d = spec.ctx.deriv(a, i);
      sub[d] = keep_p ? Expr(d) + shift[a][i] : shift[a][i];
    }
  std::vector<Expr> out;
  for (const auto& row : spec.kappa) {
    Expr e;
    for (std::size_t j = 0; j < terms.size(); ++j)
      if (!row[j].is_zero()) e += row[j] * terms[j].substitute(sub);
    out.push_back(e);
  }
  return out;
}

std::vector<Expr> alpha_conditions(const MongeAmpereSpec& spec) {
  auto al = alpha_symbols(spec.m, spec.n);
  std::vector<std::vector<Expr>> shift(spec.m);
  for (std::size_t a = 0; a < spec.m; ++a)
    for (Symbol s : al[a]) shift[a].emplace_back(s);
  return shifted_equations(spec, shift, false);
}

}  // namespace

MongeAmpereSpec shift_spec(const MongeAmpereSpec& spec, const std::vector<std::vector<Rational>>& alpha) {
  std::vector<std::vector<Expr>> shift(spec.m);
  for (std::size_t a = 0; a < spec.m; ++a)
    for (std::size_t i = 0; i < spec.n; ++i) shift[a].emplace_back(alpha.at(a).at(i));
  auto eqs = shifted_equations(spec, shift, true);
  auto terms = ma_terms(spec.ctx);
  std::vector<Symbol> unknowns;
  for (std::size_t j = 0; j < terms.size(); ++j) unknowns.push_back(sym("shift#" + std::to_string(j)));
  std::vector<std::vector<Expr>> table;
  for (const Expr& e : eqs) {
    Expr diff = e;
    for (std::size_t j = 0; j < terms.size(); ++j) diff -= Expr(unknowns[j]) * terms[j];
    auto sol = solve_linear(coefficient_equations(spec.ctx, diff), unknowns);
    if (!sol.consistent || !sol.free.empty()) throw Error("shifted equation is not of Monge-Ampere form");
    auto b = sol.bindings();
    std::vector<Expr> row;
    for (Symbol u : unknowns) row.push_back(b.at(u));
    table.push_back(std::move(row));
  }
  return make_spec(spec.ctx, std::move(table));
}

ShiftSolution eliminate_inhomogeneity(const MongeAmpereSpec& spec, int search_radius) {
  ShiftSolution out;
  out.alpha.assign(spec.m, std::vector<Rational>(spec.n, Rational(0)));
  out.conditions = alpha_conditions(spec);
  bool homogeneous = std::all_of(spec.kappa.begin(), spec.kappa.end(), [](const auto& row) { return row.back().is_zero(); });
  if (homogeneous) {
    out.found = true;
    out.shifted = spec;
    out.method = "already homogeneous";
    return out;
  }
  if (!is_constant_spec(spec)) {
    out.method = "symbolic";
    out.residuals = out.conditions;
    return out;
  }
  auto al = alpha_symbols(spec.m, spec.n);
  std::vector<Symbol> all;
  for (const auto& row : al) all.insert(all.end(), row.begin(), row.end());

  auto accept = [&](const Substitution& values, const std::string& method) {
    for (const Expr& c : out.conditions)
      if (!c.substitute(values).is_zero()) return false;
    for (std::size_t a = 0; a < spec.m; ++a)
      for (std::size_t i = 0; i < spec.n; ++i) {
        auto it = values.find(al[a][i]);
        out.alpha[a][i] = it == values.end() ? Rational(0) : it->second.constant_value();
      }
    out.shifted = shift_spec(spec, out.alpha);
    for (const auto& row : out.shifted.kappa)
      if (!row.back().is_zero()) return false;
    out.found = true;
    out.method = method;
    return true;
  };

  // Single nonzero row (or column): every minor of order >= 2 vanishes and
  // the conditions become linear.
  auto try_subset = [&](const std::vector<Symbol>& keep, const std::string& method) {
    Substitution zero_rest;
    for (Symbol s : all)
      if (std::find(keep.begin(), keep.end(), s) == keep.end()) zero_rest[s] = Expr(0);
    std::vector<Expr> eqs;
    for (const Expr& c : out.conditions) eqs.push_back(c.substitute(zero_rest));
    auto sol = solve_linear(eqs, keep);
    if (!sol.consistent) return false;
    Substitution values = zero_rest;
    for (const auto& [s, v] : sol.bindings_with_free(Expr(0))) values[s] = v;
    for (Symbol s : keep)
      if (!values.count(s)) values[s] = Expr(0);
    return accept(values, method);
  };
  for (std::size_t a = 0; a < spec.m; ++a)
    if (try_subset(al[a], "row " + std::to_string(a + 1))) return out;
  for (std::size_t i = 0; i < spec.n; ++i) {
    std::vector<Symbol> col;
    for (std::size_t a = 0; a < spec.m; ++a) col.push_back(al[a][i]);
    if (try_subset(col, "column " + std::to_string(i + 1))) return out;
  }
  SearchResult sr = solve_bounded(out.conditions, all, search_radius);
  if (sr.found) {
    Substitution values;
    for (std::size_t k = 0; k < all.size(); ++k) values[all[k]] = Expr(sr.values[k]);
    if (accept(values, sr.method)) return out;
  }
  out.method = sr.method;
  out.residuals = sr.residuals;
  for (auto& row : out.alpha) std::fill(row.begin(), row.end(), Rational(0));
  return out;
}

// ------------------------------------------------------- symmetry conditions

std::vector<Expr> ConstraintSet::all() const {
  std::vector<Expr> out;
  for (const auto& row : per_equation) out.insert(out.end(), row.begin(), row.end());
  for (const auto& row : extra) out.insert(out.end(), row.begin(), row.end());
  return out;
}

namespace {

/// Graded multiplier matching for one generic equation. Returns false when
/// some stage is inconsistent with multiplier degree <= L.
bool derive_template(ConstraintTemplate& T, unsigned L) {
  JetContext ctx = ma_context(T.m, T.n);
  std::vector<unsigned> deg;
  auto terms = ma_terms(ctx, &deg);
  const std::size_t base = T.m == T.n ? 0 : 1;
  T.coefficient_symbols.clear();
  T.conditions.clear();
  T.pivot_labels.clear();
  T.extra.clear();
  Expr delta;
  unsigned top = 0;
  for (std::size_t j = 0; j + 1 < terms.size(); ++j) {
    Symbol K = sym("K" + std::to_string(j + base));
    T.coefficient_symbols.push_back(K);
    delta += Expr(K) * terms[j];
    top = std::max(top, deg[j]);
  }
  VectorField X = VectorField::zero(ctx);
  for (std::size_t i = 0; i < T.n; ++i) X.xi[i] = Expr(ctx.x()[i]) - Expr(sym("f" + std::to_string(i + 1)));
  Expr R = apply_prolonged(ctx, prolong1(ctx, X), delta);

  std::vector<Expr> delta_part(top + 1), R_part(top + 2);
  for (unsigned D = 1; D <= top; ++D) delta_part[D] = degree_part(ctx, delta, D);
  for (unsigned D = 1; D <= top + 1; ++D) R_part[D] = degree_part(ctx, R, D);

  Substitution known;
  std::vector<Expr> lambda(L + 1);
  bool ok = true;
  for (unsigned D = 1; D <= L + top; ++D) {
    std::vector<Symbol> unknowns;
    if (D - 1 <= L) {
      Expr lam;
      auto monos = monomials_of_degree(ctx.derivatives(), D - 1);
      for (std::size_t k = 0; k < monos.size(); ++k) {
        Symbol c = sym("lam#" + std::to_string(D - 1) + "_" + std::to_string(k));
        unknowns.push_back(c);
        lam += Expr(c) * monos[k];
      }
      lambda[D - 1] = lam;
    }
    std::vector<std::size_t> new_k;
    if (D >= 2 && D <= top) {
      for (std::size_t j = 0; j + 1 < terms.size(); ++j)
        if (deg[j] == D) {
          unknowns.push_back(T.coefficient_symbols[j]);
          new_k.push_back(j);
        }
    }
    Expr E = D <= top + 1 ? R_part[D] : Expr();
    for (unsigned g = 0; g <= std::min(D - 1, L); ++g) {
      unsigned rest = D - g;
      if (rest >= 1 && rest <= top) E -= lambda[g] * delta_part[rest];
    }
    E = E.substitute(known);
    auto sol = solve_linear(coefficient_equations(ctx, E), unknowns);
    if (!sol.consistent) {
      ok = false;
      for (const Expr& r : sol.residuals) T.extra.push_back(normalize_monic(r));
    }
    auto b = sol.bindings_with_free(Expr(0));
    for (Symbol u : unknowns)
      if (!b.count(u)) b[u] = Expr(0);
    for (auto& [s, v] : known) v = v.substitute(b);
    for (const auto& [s, v] : b) known[s] = v;
    for (std::size_t j : new_k) {
      Symbol K = T.coefficient_symbols[j];
      T.conditions.push_back(normalize_pivot(Expr(K) - known.at(K), K));
      T.pivot_labels.push_back(j + base);
    }
  }
  // Conditions in table order of the pivots.
  std::vector<std::size_t> order(T.conditions.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return T.pivot_labels[a] < T.pivot_labels[b]; });
  std::vector<Expr> conds;
  std::vector<std::size_t> labels;
  for (std::size_t k : order) {
    conds.push_back(T.conditions[k]);
    labels.push_back(T.pivot_labels[k]);
  }
  T.conditions = std::move(conds);
  T.pivot_labels = std::move(labels);
  Expr mult;
  for (const Expr& l : lambda) mult += l.substitute(known);
  T.multiplier = mult;
  return ok;
}

}  // namespace

const ConstraintTemplate& constraint_template(std::size_t m, std::size_t n) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::size_t>, ConstraintTemplate> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(m, n);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  ConstraintTemplate T;
  T.m = m;
  T.n = n;
  const unsigned top = static_cast<unsigned>(std::min(m, n));
  // Default multiplier degree top - 1, one retry at top.
  if (!derive_template(T, top == 0 ? 0 : top - 1)) derive_template(T, top);
  return cache.emplace(key, std::move(T)).first->second;
}

ConstraintSet symmetry_constraints(const MongeAmpereSpec& spec) {
  for (const auto& row : spec.kappa) {
    if (!row.back().is_zero()) throw Error("eliminate κ-constant first");
  }
  const ConstraintTemplate& T = constraint_template(spec.m, spec.n);
  ConstraintSet out;
  out.pivot_labels = T.pivot_labels;
  for (const auto& row : spec.kappa) {
    Substitution sub;
    for (std::size_t j = 0; j < T.coefficient_symbols.size(); ++j) sub[T.coefficient_symbols[j]] = row[j];
    std::vector<Expr> conds, extra;
    for (const Expr& c : T.conditions) conds.push_back(c.substitute(sub));
    for (const Expr& c : T.extra) extra.push_back(c.substitute(sub));
    out.per_equation.push_back(std::move(conds));
    out.extra.push_back(std::move(extra));
  }
  return out;
}

std::vector<Expr> instantiate_f(const MongeAmpereSpec& spec, const std::vector<Expr>& conditions,
                                const std::vector<Expr>& f) {
  if (f.size() != spec.n) throw Error("expected " + std::to_string(spec.n) + " functions f_i");
  const FunctionTable& ft = spec.ctx.functions();
  auto fs = spec.f_symbols();
  Substitution sub;
  for (std::size_t i = 0; i < spec.n; ++i) {
    sub[fs[i]] = f[i];
    for (Symbol u : spec.ctx.u()) sub[ft.first_partial(fs[i], u)] = f[i].diff(u, &ft);
  }
  std::vector<Expr> out;
  for (const Expr& c : conditions) out.push_back(c.substitute(sub));
  return out;
}

// ------------------------------------------------------------ constant case

ConstantSolution solve_constant_case(const MongeAmpereSpec& spec, int search_radius) {
  if (!is_constant_spec(spec)) throw Error("solve_constant_case needs constant coefficients");
  ConstraintSet cs = symmetry_constraints(spec);
  std::vector<Symbol> beta;
  std::vector<Expr> f;
  for (std::size_t i = 0; i < spec.n; ++i) {
    Expr fi;
    for (std::size_t a = 0; a < spec.m; ++a) {
      Symbol b = sym("beta" + idx(i + 1, a + 1));
      beta.push_back(b);
      fi += Expr(b) * Expr(spec.ctx.u()[a]);
    }
    f.push_back(fi);
  }
  ConstantSolution out;
  out.conditions = instantiate_f(spec, cs.all(), f);
  std::vector<Expr> nonzero;
  for (const Expr& c : out.conditions)
    if (!c.is_zero()) nonzero.push_back(c);
  SearchResult sr = solve_bounded(nonzero, beta, search_radius);
  out.method = sr.method;
  out.beta.assign(spec.n, std::vector<Rational>(spec.m, Rational(0)));
  if (!sr.found) {
    out.residuals = sr.residuals;
    return out;
  }
  out.reducible = true;
  for (std::size_t i = 0; i < spec.n; ++i)
    for (std::size_t a = 0; a < spec.m; ++a) out.beta[i][a] = sr.values[i * spec.m + a];
  return out;
}

// ----------------------------------------------------------------- reduce

PdeSystem expected_target(const MongeAmpereSpec& spec, const PointTransformation& T) {
  std::vector<unsigned> deg;
  ma_terms(spec.ctx, &deg);
  const JetContext& tgt = T.target();
  std::vector<Expr> eqs;
  for (const auto& row : spec.kappa) {
    Expr e;
    std::size_t k = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (deg[j] != 1) continue;
      e += T.to_target(row[j]) * Expr(tgt.derivatives()[k++]);
    }
    eqs.push_back(e);
  }
  return PdeSystem(tgt, std::move(eqs));
}

MaReduction reduce(const MongeAmpereSpec& spec, const std::vector<Expr>& f) {
  ConstraintSet cs = symmetry_constraints(spec);
  auto generic = cs.all();
  auto inst = instantiate_f(spec, generic, f);
  std::string failing;
  for (std::size_t k = 0; k < inst.size(); ++k) {
    if (!inst[k].is_zero()) {
      if (!failing.empty()) failing += "; ";
      failing += generic[k].to_string() + " = " + inst[k].to_string();
    }
  }
  if (!failing.empty()) throw Error("symmetry constraints violated: " + failing);

  MaReduction out;
  out.map = build_affine(spec.ctx, f);
  PdeSystem sys = build_system(spec);
  out.transformed = apply(out.map, sys);
  PdeSystem expected = expected_target(spec, out.map);
  out.matches_target = true;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    auto c = proportionality_factor(out.map.target(), out.transformed.system.equations()[i], expected.equations()[i]);
    out.factors.push_back(c ? *c : Expr());
    if (!c) out.matches_target = false;
  }
  out.target = out.matches_target ? expected : out.transformed.system;
  classify_into(out.report, out.target);
  out.report.transformed = out.transformed;
  for (const auto& X : general_symmetry_form(spec.ctx, f)) out.report.pushed.push_back(pushforward_field(out.map, X));
  const JetContext& tgt = out.map.target();
  VectorField scaling = VectorField::zero(tgt);
  for (std::size_t i = 0; i < tgt.n(); ++i) {
    if (!(out.report.pushed[i] == VectorField::translation(tgt, i))) out.report.symmetries_canonical = false;
    scaling.xi[i] = Expr(tgt.x()[i]);
  }
  if (!(out.report.pushed.back() == scaling)) out.report.symmetries_canonical = false;
  return out;
}

MaReduction reduce(const MongeAmpereSpec& spec, const std::vector<std::vector<Rational>>& beta) {
  if (beta.size() != spec.n) throw Error("beta must have n rows");
  std::vector<Expr> f;
  for (std::size_t i = 0; i < spec.n; ++i) {
    if (beta[i].size() != spec.m) throw Error("beta must have m columns");
    Expr fi;
    for (std::size_t a = 0; a < spec.m; ++a) fi += Expr(beta[i][a]) * Expr(spec.ctx.u()[a]);
    f.push_back(fi);
  }
  return reduce(spec, f);
}

std::vector<VectorField> general_symmetry_form(const JetContext& ctx, const std::vector<Expr>& f) {
  if (f.size() != ctx.n()) throw Error("expected " + std::to_string(ctx.n()) + " functions f_i");
  std::vector<VectorField> out;
  for (std::size_t i = 0; i < ctx.n(); ++i) out.push_back(VectorField::translation(ctx, i));
  VectorField S = VectorField::zero(ctx);
  for (std::size_t i = 0; i < ctx.n(); ++i) S.xi[i] = Expr(ctx.x()[i]) - f[i];
  out.push_back(S);
  return out;
}

// -------------------------------------------------------------- curvature

SurfaceSymbols surface_symbols() {
  return {sym("w_z1"), sym("w_z2"), sym("w_z1z1"), sym("w_z1z2"), sym("w_z2z2")};
}

CurvatureReport curvature_check(const Expr& kappa) {
  SurfaceSymbols s = surface_symbols();
  const Symbol generic = sym("kappa");
  for (Symbol x : kappa.symbols()) {
    if (x != s.w1 && x != s.w2 && x != generic) {
      throw Error("kappa may depend on w_z1, w_z2 only (found '" + x.name() + "')");
    }
  }
  const Expr w1(s.w1), w2(s.w2), w11(s.w11), w12(s.w12), w22(s.w22), one(1);
  const Expr S = one + w1 * w1 + w2 * w2;
  const Expr G = (w11 * w22 - w12 * w12) / S.pow(2);
  const Expr Hn = (one + w2 * w2) * w11 - Expr(2) * w1 * w2 * w12 + (one + w1 * w1) * w22;
  const Expr H2 = Hn * Hn / (Expr(4) * S.pow(3));  // H^2, H = Hn / (2 S^(3/2))
  const Expr surface = reference::surface_equation(kappa, s.w1, s.w2, s.w11, s.w12, s.w22);

  CurvatureReport rep;
  rep.identity_factor = -4;
  rep.specialization_factor = -1;
  rep.cleared = Expr(rep.identity_factor) * S.pow(3) * (G - kappa * H2);
  rep.identity = equals(rep.cleared, surface);

  // Reduced Example-1 equation with the kappa_10..15 specialization.
  JetContext src = reference::example1_context();
  PointTransformation T = build_affine(src, reference::example1_shift(src));
  const JetContext& tgt = T.target();
  Expr eq2 = reference::example1_target(tgt)[1];
  auto spec = reference::kappa_specialization(kappa, s.w1, s.w2);
  Substitution sub;
  for (int k = 10; k <= 15; ++k) sub[sym("k" + std::to_string(k))] = spec[static_cast<std::size_t>(k - 10)];
  sub[tgt.deriv(0, 0)] = w11;
  sub[tgt.deriv(0, 1)] = w12;
  sub[tgt.deriv(1, 0)] = w12;
  sub[tgt.deriv(1, 1)] = w22;
  rep.specialization = equals(eq2.substitute(sub), Expr(rep.specialization_factor) * surface);
  return rep;
}

bool curvature_identity_check(const Expr& kappa) { return curvature_check(kappa).ok(); }

}  // namespace liereduce
