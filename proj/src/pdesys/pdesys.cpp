#include "liereduce/pdesys.hpp"

#include <algorithm>

namespace liereduce {

std::string JetContext::derivative_name(Symbol u, Symbol x) { return "d(" + u.name() + "," + x.name() + ")"; }

JetContext::JetContext(std::vector<Symbol> indep, std::vector<Symbol> dep, std::vector<Symbol> params,
                       FunctionTable functions)
    : x_(std::move(indep)), u_(std::move(dep)), params_(std::move(params)), functions_(std::move(functions)) {
  if (x_.empty() || u_.empty()) throw Error("a jet context needs at least one independent and one dependent variable");
  std::unordered_set<std::uint32_t> seen;
  for (const auto* list : {&x_, &u_, &params_}) {
    for (Symbol s : *list) {
      if (!seen.insert(s.id()).second) throw Error("symbol '" + s.name() + "' declared twice");
    }
  }
  for (Symbol u : u_) {
    for (Symbol x : x_) {
      Symbol d = Symbol::intern(derivative_name(u, x));
      derivs_.push_back(d);
      deriv_ids_.insert(d.id());
    }
  }
}

void JetContext::add_param(Symbol p) {
  if (is_declared(p)) throw Error("symbol '" + p.name() + "' declared twice");
  params_.push_back(p);
}

void JetContext::add_function(Symbol f, std::vector<Symbol> args) {
  if (is_declared(f)) throw Error("symbol '" + f.name() + "' declared twice");
  functions_.declare(f, std::move(args));
}

std::optional<std::pair<std::size_t, std::size_t>> JetContext::derivative_index(Symbol s) const {
  if (!is_derivative(s)) return std::nullopt;
  auto it = std::find(derivs_.begin(), derivs_.end(), s);
  auto k = static_cast<std::size_t>(it - derivs_.begin());
  return std::make_pair(k / n(), k % n());
}

std::optional<std::size_t> JetContext::indep_index(Symbol s) const {
  auto it = std::find(x_.begin(), x_.end(), s);
  if (it == x_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - x_.begin());
}

std::optional<std::size_t> JetContext::dep_index(Symbol s) const {
  auto it = std::find(u_.begin(), u_.end(), s);
  if (it == u_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - u_.begin());
}

bool JetContext::is_declared(Symbol s) const {
  if (indep_index(s) || dep_index(s) || is_derivative(s)) return true;
  if (std::find(params_.begin(), params_.end(), s) != params_.end()) return true;
  return functions_.info(s).has_value();
}

ExprMatrix JetContext::gradient_matrix() const {
  ExprMatrix h(m(), n());
  for (std::size_t a = 0; a < m(); ++a)
    for (std::size_t i = 0; i < n(); ++i) h(a, i) = Expr(deriv(a, i));
  return h;
}

PdeSystem::PdeSystem(JetContext ctx, std::vector<Expr> equations) : ctx_(std::move(ctx)), eqs_(std::move(equations)) {
  for (const Expr& e : eqs_) {
    if (e.is_zero()) throw Error("degenerate equation (identically zero)");
    for (Symbol s : e.den().variables()) {
      if (ctx_.is_derivative(s)) throw Error("not polynomial in derivatives");
    }
  }
}

std::vector<DerivMonomial> decompose_equation(const JetContext& ctx, const Expr& eq) {
  for (Symbol s : eq.den().variables()) {
    if (ctx.is_derivative(s)) throw Error("not polynomial in derivatives");
  }
  std::vector<DerivMonomial> out;
  for (auto& [m, c] : coefficients_in(eq.num(), [&](std::uint32_t id) { return ctx.is_derivative_id(id); })) {
    out.push_back({m, Expr::fraction(c, eq.den())});
  }
  return out;
}

std::vector<std::vector<DerivMonomial>> decompose(const PdeSystem& sys) {
  std::vector<std::vector<DerivMonomial>> out;
  for (const Expr& e : sys.equations()) out.push_back(decompose_equation(sys.context(), e));
  return out;
}

Expr recompose(const std::vector<DerivMonomial>& terms) {
  Expr sum;
  for (const auto& t : terms) sum += t.coefficient * Expr(Poly::monomial(t.derivatives, 1));
  return sum;
}

std::vector<std::uint32_t> degree_in_derivatives(const PdeSystem& sys) {
  std::vector<std::uint32_t> out;
  for (const auto& terms : decompose(sys)) {
    std::uint32_t d = 0;
    for (const auto& t : terms) d = std::max(d, t.degree());
    out.push_back(d);
  }
  return out;
}

bool is_autonomous(const PdeSystem& sys) {
  const JetContext& ctx = sys.context();
  for (const Expr& e : sys.equations()) {
    for (Symbol s : e.symbols()) {
      if (ctx.indep_index(s)) return false;
      // Coefficient functions (and their partials) of an independent variable.
      if (auto info = ctx.functions().info(s)) {
        for (Symbol a : ctx.functions().args(info->function))
          if (ctx.indep_index(a)) return false;
      }
    }
  }
  return true;
}

std::vector<std::optional<std::uint32_t>> homogeneity_degree(const PdeSystem& sys) {
  std::vector<std::optional<std::uint32_t>> out;
  for (const auto& terms : decompose(sys)) {
    std::optional<std::uint32_t> d;
    bool ok = !terms.empty();
    for (const auto& t : terms) {
      if (!d) d = t.degree();
      if (*d != t.degree()) ok = false;
    }
    if (ok && *d == 0) ok = false;  // nonzero derivative-free part
    out.push_back(ok ? d : std::nullopt);
  }
  return out;
}

bool is_quasilinear(const PdeSystem& sys) {
  auto deg = degree_in_derivatives(sys);
  return std::all_of(deg.begin(), deg.end(), [](std::uint32_t d) { return d <= 1; });
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(k) - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + static_cast<std::size_t>(i)) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::vector<Expr> gradient_minors(const JetContext& ctx, std::size_t order) {
  const std::size_t m = ctx.m(), n = ctx.n();
  if (order < 1 || order > std::min(m, n)) throw Error("minor order out of range");
  ExprMatrix h = ctx.gradient_matrix();
  std::vector<Expr> out;
  if (m == n && order == n - 1 && order >= 2) {
    for (std::size_t dr = 0; dr < m; ++dr) {
      for (std::size_t dc = 0; dc < n; ++dc) {
        std::vector<std::size_t> rs, cs;
        for (std::size_t k = 0; k < n; ++k) {
          if (k != dr) rs.push_back(k);
          if (k != dc) cs.push_back(k);
        }
        out.push_back(h.submatrix(rs, cs).det());
      }
    }
    return out;
  }
  for (const auto& rs : combinations(m, order))
    for (const auto& cs : combinations(n, order)) out.push_back(h.submatrix(rs, cs).det());
  return out;
}

}  // namespace liereduce
