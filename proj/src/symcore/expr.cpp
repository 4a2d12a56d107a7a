#include "liereduce/expr.hpp"

#include <algorithm>
#include <sstream>

namespace liereduce {

// ----------------------------------------------------------- FunctionTable

void FunctionTable::declare(Symbol f, std::vector<Symbol> args) {
  if (declared(f)) throw Error("function '" + f.name() + "' declared twice");
  functions_.push_back(f);
  args_.emplace(f, std::move(args));
}

bool FunctionTable::declared(Symbol f) const { return args_.contains(f); }

const std::vector<Symbol>& FunctionTable::args(Symbol f) const {
  auto it = args_.find(f);
  if (it == args_.end()) throw Error("'" + f.name() + "' is not a declared function");
  return it->second;
}

std::optional<FunctionTable::Info> FunctionTable::info(Symbol s) const {
  if (args_.empty()) return std::nullopt;
  if (auto it = args_.find(s); it != args_.end()) return Info{s, std::vector<unsigned>(it->second.size(), 0)};
  const std::string& name = s.name();
  if (name.size() < 5 || name.compare(0, 2, "d(") != 0 || name.back() != ')') return std::nullopt;
  std::vector<std::string> parts;
  std::string cur;
  for (std::size_t i = 2; i + 1 < name.size(); ++i) {
    if (name[i] == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(name[i]);
    }
  }
  parts.push_back(cur);
  if (parts.size() < 2) return std::nullopt;
  auto f = Symbol::lookup(parts[0]);
  if (!f || !declared(*f)) return std::nullopt;
  const auto& a = args(*f);
  Info out{*f, std::vector<unsigned>(a.size(), 0)};
  for (std::size_t k = 1; k < parts.size(); ++k) {
    auto pos = std::find_if(a.begin(), a.end(), [&](Symbol v) { return v.name() == parts[k]; });
    if (pos == a.end()) return std::nullopt;
    ++out.orders[static_cast<std::size_t>(pos - a.begin())];
  }
  return out;
}

Symbol FunctionTable::partial_symbol(Symbol f, const std::vector<unsigned>& orders) const {
  const auto& a = args(f);
  if (orders.size() != a.size()) throw Error("partial order arity mismatch for '" + f.name() + "'");
  std::string name = "d(" + f.name();
  bool any = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (unsigned k = 0; k < orders[i]; ++k) {
      name += "," + a[i].name();
      any = true;
    }
  }
  if (!any) return f;
  return Symbol::intern(name + ")");
}

std::optional<Symbol> FunctionTable::partial(Symbol s, Symbol x) const {
  auto inf = info(s);
  if (!inf) return std::nullopt;
  const auto& a = args(inf->function);
  auto pos = std::find(a.begin(), a.end(), x);
  if (pos == a.end()) return std::nullopt;
  ++inf->orders[static_cast<std::size_t>(pos - a.begin())];
  return partial_symbol(inf->function, inf->orders);
}

Symbol FunctionTable::first_partial(Symbol f, Symbol x) const {
  auto p = partial(f, x);
  if (!p) throw Error("'" + f.name() + "' does not depend on '" + x.name() + "'");
  return *p;
}

// -------------------------------------------------------------------- Expr

Expr Expr::make(Poly num, Poly den) { return Expr(std::make_shared<const Data>(Data{std::move(num), std::move(den)})); }

Expr::Expr() {
  static const std::shared_ptr<const Data> zero = std::make_shared<const Data>(Data{Poly{}, Poly{1}});
  data_ = zero;
}

Expr::Expr(long value) : Expr(Poly(value)) {}
Expr::Expr(const Rational& value) : Expr(Poly(value)) {}
Expr::Expr(Poly p) : data_(std::make_shared<const Data>(Data{std::move(p), Poly{1}})) {}
Expr::Expr(Symbol s) : Expr(Poly::variable(s)) {}

Expr Expr::fraction(Poly num, Poly den) {
  if (den.is_zero()) throw Error("zero denominator");
  if (num.is_zero()) return Expr();
  if (den.is_constant()) return Expr(num.scaled(Rational(1) / den.constant_value()));
  Poly g = gcd(num, den);
  if (!g.is_constant()) {
    num = *num.divide_exact(g);
    den = *den.divide_exact(g);
  }
  Rational c = den.content();
  if (c != 1) {
    Rational inv = Rational(1) / c;
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  if (den.is_constant()) return Expr(std::move(num));
  return make(std::move(num), std::move(den));
}

Rational Expr::constant_value() const {
  if (!is_constant()) throw Error("expression is not constant");
  return num().is_zero() ? Rational(0) : num().constant_value();
}

std::vector<Symbol> Expr::symbols() const {
  auto a = num().variables();
  auto b = den().variables();
  std::vector<Symbol> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::size_t Expr::hash() const { return num().hash() * 31 + den().hash(); }

Expr Expr::operator-() const { return make(-num(), den()); }

Expr Expr::operator+(const Expr& o) const {
  if (o.is_zero()) return *this;
  if (is_zero()) return o;
  if (is_polynomial() && o.is_polynomial()) return Expr(num() + o.num());
  if (den() == o.den()) return fraction(num() + o.num(), den());
  if (o.is_polynomial()) return make(num() + o.num() * den(), den());
  if (is_polynomial()) return make(num() * o.den() + o.num(), o.den());
  // Henrici: with g = gcd(b, d), only g can share factors with the sum.
  Poly g = gcd(den(), o.den());
  if (g.is_constant()) {
    Poly t = num() * o.den() + o.num() * den();
    if (t.is_zero()) return Expr();
    return make(std::move(t), den() * o.den());
  }
  Poly bg = *den().divide_exact(g), dg = *o.den().divide_exact(g);
  Poly t = num() * dg + o.num() * bg;
  if (t.is_zero()) return Expr();
  Poly g2 = gcd(t, g);
  if (!g2.is_constant()) {
    t = *t.divide_exact(g2);
    g = *g.divide_exact(g2);
  }
  // Henrici: gcd(t, bg*dg*g) = 1 and the product of primitive factors is
  // primitive, so the result is already canonical.
  return make(std::move(t), bg * dg * g);
}

Expr Expr::operator-(const Expr& o) const { return *this + (-o); }

Expr Expr::operator*(const Expr& o) const {
  if (is_zero() || o.is_zero()) return Expr();
  if (is_polynomial() && o.is_polynomial()) return Expr(num() * o.num());
  if (o.is_constant()) return make(num().scaled(o.constant_value()), den());
  if (is_constant()) return make(o.num().scaled(constant_value()), o.den());
  Poly a = num(), b = den(), c = o.num(), d = o.den();
  if (!d.is_constant()) {
    Poly g = gcd(a, d);
    if (!g.is_constant()) {
      a = *a.divide_exact(g);
      d = *d.divide_exact(g);
    }
  }
  if (!b.is_constant()) {
    Poly g = gcd(c, b);
    if (!g.is_constant()) {
      c = *c.divide_exact(g);
      b = *b.divide_exact(g);
    }
  }
  Poly nd = b * d;
  Rational k = nd.content();
  if (k != 1) {
    Rational inv = Rational(1) / k;
    nd = nd.scaled(inv);
    a = a.scaled(inv);
  }
  if (nd.is_constant()) return Expr(a * c);
  return make(a * c, std::move(nd));
}

Expr Expr::operator/(const Expr& o) const {
  if (o.is_zero()) throw Error("zero denominator");
  if (o.is_constant()) return make(num().scaled(Rational(1) / o.constant_value()), den());
  // o^{-1} = den/num, normalized so the new denominator is canonical.
  Rational c = o.num().content();
  Expr inv = o.num().is_constant() ? Expr(o.den().scaled(Rational(1) / o.num().constant_value()))
                                   : make(o.den().scaled(Rational(1) / c), o.num().scaled(Rational(1) / c));
  return *this * inv;
}

Expr Expr::pow(int e) const {
  if (e < 0) return Expr(1) / pow(-e);
  if (e == 0) return Expr(1);
  auto ue = static_cast<unsigned>(e);
  if (is_polynomial()) return Expr(num().pow(ue));
  return make(num().pow(ue), den().pow(ue));
}

Poly diff_poly(const Poly& p, Symbol x, const FunctionTable* functions) {
  Poly r = p.diff(x);
  if (functions && !functions->functions().empty()) {
    for (Symbol s : p.variables()) {
      if (s == x) continue;
      if (auto ps = functions->partial(s, x)) r += p.diff(s) * Poly::variable(*ps);
    }
  }
  return r;
}

Expr Expr::diff(Symbol x, const FunctionTable* functions) const {
  Poly dn = diff_poly(num(), x, functions);
  if (is_polynomial()) return Expr(std::move(dn));
  Poly dd = diff_poly(den(), x, functions);
  if (dd.is_zero()) return fraction(std::move(dn), den());
  return fraction(dn * den() - num() * dd, den() * den());
}

namespace {

struct Raw {
  Poly num;
  Poly den;
};

/// Unnormalized substitution into a polynomial, over a common denominator.
Raw substitute_raw(const Poly& p, const Substitution& bindings) {
  std::vector<Symbol> bound;
  for (Symbol s : p.variables()) {
    if (bindings.contains(s)) bound.push_back(s);
  }
  if (bound.empty()) return {p, Poly(1)};

  // Group the bound symbols by (canonical) denominator.
  struct Group {
    Poly den;
    std::vector<Symbol> members;
    std::uint32_t max_degree = 0;
    std::vector<Poly> den_powers;
  };
  std::vector<Group> groups;
  std::unordered_map<Symbol, std::size_t> group_of;
  for (Symbol s : bound) {
    const Expr& v = bindings.at(s);
    std::size_t gi = 0;
    if (v.is_polynomial()) {
      gi = SIZE_MAX;
    } else {
      for (gi = 0; gi < groups.size(); ++gi)
        if (groups[gi].den == v.den()) break;
      if (gi == groups.size()) groups.push_back({v.den(), {}, 0, {}});
      groups[gi].members.push_back(s);
    }
    group_of.emplace(s, gi);
  }

  auto in_bound = [&](std::uint32_t id) { return std::any_of(bound.begin(), bound.end(), [&](Symbol s) { return s.id() == id; }); };
  auto coeffs = coefficients_in(p, in_bound);

  for (const auto& [m, c] : coeffs) {
    for (auto& g : groups) {
      std::uint32_t d = 0;
      for (Symbol s : g.members) d += m.exponent(s);
      g.max_degree = std::max(g.max_degree, d);
    }
  }
  for (auto& g : groups) {
    g.den_powers.push_back(Poly(1));
    for (std::uint32_t k = 1; k <= g.max_degree; ++k) g.den_powers.push_back(g.den_powers.back() * g.den);
  }

  // Powers of numerators, computed lazily.
  std::unordered_map<Symbol, std::vector<Poly>> num_powers;
  auto num_power = [&](Symbol s, std::uint32_t e) -> const Poly& {
    auto& v = num_powers[s];
    if (v.empty()) v.push_back(Poly(1));
    while (v.size() <= e) v.push_back(v.back() * bindings.at(s).num());
    return v[e];
  };

  PolyAccumulator acc;
  for (const auto& [m, c] : coeffs) {
    Poly term = c;
    for (const auto& f : m.factors()) {
      Symbol s = Symbol::from_id(f.var);
      term = term * num_power(s, f.exp);
    }
    for (auto& g : groups) {
      std::uint32_t d = 0;
      for (Symbol s : g.members) d += m.exponent(s);
      if (d < g.max_degree) term = term * g.den_powers[g.max_degree - d];
    }
    acc.add(term);
  }
  Poly numer = acc.take();
  Poly denom(1);
  for (auto& g : groups) {
    std::uint32_t e = g.max_degree;
    // Cancel whole powers of the group denominator first; cheaper than gcd.
    while (e > 0 && !numer.is_zero()) {
      auto q = numer.divide_exact(g.den);
      if (!q) break;
      numer = std::move(*q);
      --e;
    }
    if (numer.is_zero()) e = 0;
    denom = denom * g.den_powers[e];
  }
  return {std::move(numer), std::move(denom)};
}

}  // namespace

Expr substitute_poly(const Poly& p, const Substitution& bindings) {
  Raw r = substitute_raw(p, bindings);
  return Expr::fraction(std::move(r.num), std::move(r.den));
}

Expr Expr::substitute(const Substitution& bindings) const {
  if (bindings.empty()) return *this;
  Raw n = substitute_raw(num(), bindings);
  if (is_polynomial()) return Expr::fraction(std::move(n.num), std::move(n.den));
  Raw d = substitute_raw(den(), bindings);
  if (d.num.is_zero()) throw Error("zero denominator");
  if (n.den == d.den) return Expr::fraction(std::move(n.num), std::move(d.num));
  return Expr::fraction(n.num * d.den, d.num * n.den);
}

std::optional<Rational> Expr::evaluate(const Valuation& v) const {
  Rational d = liereduce::evaluate(den(), v);
  if (sgn(d) == 0) return std::nullopt;
  return liereduce::evaluate(num(), v) / d;
}

// ---------------------------------------------------------------- printing

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    Rational c = t.coeff;
    bool neg = sgn(c) < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    bool need_star = false;
    if (t.mono.is_one() || c != 1) {
      out += c.get_str();
      need_star = true;
    }
    for (const auto& f : t.mono.factors()) {
      if (need_star) out += "*";
      out += Symbol::from_id(f.var).name();
      if (f.exp > 1) out += "^" + std::to_string(f.exp);
      need_star = true;
    }
  }
  return out;
}

std::string Expr::to_string() const {
  if (is_polynomial()) return liereduce::to_string(num());
  return "(" + liereduce::to_string(num()) + ")/(" + liereduce::to_string(den()) + ")";
}

}  // namespace liereduce
