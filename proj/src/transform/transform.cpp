#include "liereduce/transform.hpp"

#include <algorithm>
#include <random>

namespace liereduce {

namespace {

/// Symbol carried by a plain coordinate expression (1*s), if any.
std::optional<Symbol> as_symbol(const Expr& e) {
  if (!e.is_polynomial() || e.num().size() != 1) return std::nullopt;
  const auto& t = e.num().leading();
  if (t.coeff != 1 || t.mono.degree() != 1) return std::nullopt;
  return Symbol::from_id(t.mono.factors()[0].var);
}

/// Target function table: every source function keeps its name, with its
/// arguments mapped through `coordinate_image` (which must give symbols).
FunctionTable rename_function_table(const FunctionTable& src, const std::unordered_map<Symbol, Expr>& coordinate_image) {
  FunctionTable out;
  for (Symbol f : src.functions()) {
    std::vector<Symbol> args;
    for (Symbol a : src.args(f)) {
      auto it = coordinate_image.find(a);
      if (it == coordinate_image.end()) throw Error("function '" + f.name() + "' depends on unknown '" + a.name() + "'");
      auto s = as_symbol(it->second);
      if (!s) {
        throw Error("function parameter '" + f.name() + "' cannot be carried through a transformation whose inverse for '" +
                    a.name() + "' is not a coordinate");
      }
      args.push_back(*s);
    }
    out.declare(f, std::move(args));
  }
  return out;
}

/// Substitution for the symbols of `e`: coordinates by their images,
/// function partials renamed from `from` to `to`.
Substitution coordinate_substitution(const Expr& e, const std::unordered_map<Symbol, Expr>& coordinate_image,
                                     const FunctionTable& from, const FunctionTable& to) {
  Substitution sub;
  for (Symbol s : e.symbols()) {
    if (auto it = coordinate_image.find(s); it != coordinate_image.end()) {
      sub.emplace(s, it->second);
      continue;
    }
    auto inf = from.info(s);
    if (!inf || s == inf->function) continue;
    Symbol t = to.partial_symbol(inf->function, inf->orders);
    if (t != s) sub.emplace(s, Expr(t));
  }
  return sub;
}

std::vector<Symbol> default_names(const std::string& prefix, std::size_t k) {
  std::vector<Symbol> out;
  for (std::size_t i = 1; i <= k; ++i) out.push_back(Symbol::intern(prefix + std::to_string(i)));
  return out;
}

ExprMatrix jacobian(const std::vector<Expr>& F, const std::vector<Symbol>& vars, const FunctionTable& ft) {
  ExprMatrix J(F.size(), vars.size());
  for (std::size_t r = 0; r < F.size(); ++r)
    for (std::size_t c = 0; c < vars.size(); ++c) J(r, c) = F[r].diff(vars[c], &ft);
  return J;
}

std::unordered_map<Symbol, Expr> inverse_map(const JetContext& source, const std::vector<Expr>& inv_x,
                                             const std::vector<Expr>& inv_u) {
  std::unordered_map<Symbol, Expr> m;
  for (std::size_t i = 0; i < source.n(); ++i) m.emplace(source.x()[i], inv_x[i]);
  for (std::size_t a = 0; a < source.m(); ++a) m.emplace(source.u()[a], inv_u[a]);
  return m;
}

}  // namespace

PointTransformation::PointTransformation(JetContext source, JetContext target, std::vector<Expr> Z, std::vector<Expr> W,
                                         std::vector<Expr> inverse_x, std::vector<Expr> inverse_u, std::string label)
    : source_(std::move(source)),
      Z_(std::move(Z)),
      W_(std::move(W)),
      inv_x_(std::move(inverse_x)),
      inv_u_(std::move(inverse_u)),
      label_(std::move(label)) {
  const std::size_t n = source_.n(), m = source_.m();
  if (Z_.size() != n || W_.size() != m || target.n() != n || target.m() != m) {
    throw Error("transformation dimensions do not match the jet context");
  }
  if (inv_x_.size() != n || inv_u_.size() != m) throw Error("missing closed-form inverse for the transformation");
  for (const Expr& e : Z_) {
    for (Symbol s : e.symbols())
      if (source_.is_derivative(s)) throw Error("transformations may not involve derivatives");
  }
  for (const Expr& e : W_) {
    for (Symbol s : e.symbols())
      if (source_.is_derivative(s)) throw Error("transformations may not involve derivatives");
  }
  // Target context: same parameters, functions carried through the inverse.
  std::vector<Symbol> params = source_.params();
  for (Symbol p : target.params())
    if (std::find(params.begin(), params.end(), p) == params.end()) params.push_back(p);
  auto inv = inverse_map(source_, inv_x_, inv_u_);
  target_ = JetContext(target.x(), target.u(), params, rename_function_table(source_.functions(), inv));

  const FunctionTable& ft = source_.functions();
  Zx_ = jacobian(Z_, source_.x(), ft);
  Zu_ = jacobian(Z_, source_.u(), ft);
  Wx_ = jacobian(W_, source_.x(), ft);
  Wu_ = jacobian(W_, source_.u(), ft);

  ExprMatrix full(n + m, n + m);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) full(r, c) = Zx_(r, c);
    for (std::size_t c = 0; c < m; ++c) full(r, n + c) = Zu_(r, c);
  }
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) full(n + r, c) = Wx_(r, c);
    for (std::size_t c = 0; c < m; ++c) full(n + r, n + c) = Wu_(r, c);
  }
  if (full.det().is_zero()) throw Error("transformation is not generically invertible (Jacobian determinant vanishes)");

  for (std::size_t i = 0; i < n; ++i) {
    if (!(to_target(Z_[i]) == Expr(target_.x()[i]))) throw Error("supplied inverse does not invert Z" + std::to_string(i + 1));
  }
  for (std::size_t a = 0; a < m; ++a) {
    if (!(to_target(W_[a]) == Expr(target_.u()[a]))) throw Error("supplied inverse does not invert W" + std::to_string(a + 1));
  }
}

Substitution PointTransformation::coordinate_change(const Expr& e) const {
  return coordinate_substitution(e, inverse_map(source_, inv_x_, inv_u_), source_.functions(), target_.functions());
}

Expr PointTransformation::to_target(const Expr& e) const { return e.substitute(coordinate_change(e)); }

std::optional<Symbol> PointTransformation::rename_function_symbol(Symbol s) const {
  auto inf = source_.functions().info(s);
  if (!inf) return std::nullopt;
  return target_.functions().partial_symbol(inf->function, inf->orders);
}

JetSubstitution jet_transform(const PointTransformation& T) {
  const JetContext& src = T.source();
  const JetContext& tgt = T.target();
  const std::size_t n = src.n(), m = src.m();
  ExprMatrix Q(m, n);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t i = 0; i < n; ++i) Q(a, i) = Expr(tgt.deriv(a, i));
  JetSubstitution js;
  js.M = T.Wu() - Q * T.Zu();
  js.clearing_factor = js.M.det();
  if (js.clearing_factor.is_zero()) throw Error("transformation not jet-invertible generically");
  ExprMatrix rhs = Q * T.Zx() - T.Wx();
  ExprMatrix P = js.M.adjugate() * rhs;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t i = 0; i < n; ++i) js.p.push_back(P(a, i) / js.clearing_factor);
  return js;
}

namespace {

bool free_of_derivatives(const JetContext& ctx, const Poly& p) {
  for (Symbol s : p.variables())
    if (ctx.is_derivative(s)) return false;
  return true;
}

}  // namespace

TransformedSystem apply(const PointTransformation& T, const PdeSystem& sys) {
  const JetContext& src = T.source();
  const JetContext& tgt = T.target();
  JetSubstitution js = jet_transform(T);
  Expr det = T.to_target(js.clearing_factor);
  auto is_q = [&](std::uint32_t id) { return tgt.is_derivative_id(id); };

  // det = q_free * detQ with detQ primitive as a polynomial in q.
  Poly content;
  for (const auto& [mono, c] : coefficients_in(det.num(), is_q)) {
    (void)mono;
    content = gcd(content, c);
  }
  Poly detQ = *det.num().divide_exact(content);
  Expr q_free = Expr::fraction(content, det.den());
  // p_k = B_k / detQ with B_k polynomial in q.
  std::vector<Expr> B;
  for (const Expr& p : js.p) B.push_back(T.to_target(p) * Expr(detQ));

  TransformedSystem out;
  out.clearing_factor = det;
  std::vector<Expr> eqs;
  for (std::size_t s = 0; s < sys.size(); ++s) {
    auto terms = decompose_equation(src, sys.equations()[s]);
    unsigned D = 0;
    for (const auto& t : terms) D = std::max(D, t.degree());
    // acc = E * detQ^D = sum_d S_d detQ^(D-d) with S_d the degree-d part
    // in B; evaluated Horner-style in detQ. The products swell before
    // cancelling, so numerators are summed as raw polynomials grouped by
    // denominator.
    using Groups = std::vector<std::pair<Poly, PolyAccumulator>>;
    std::vector<Groups> by_degree(D + 1);
    for (const auto& t : terms) {
      Expr c = T.to_target(t.coefficient);
      Poly prod(1), den = c.den();
      for (const auto& f : t.derivatives.factors()) {
        auto idx = src.derivative_index(Symbol::from_id(f.var));
        const Expr& b = B[idx->first * src.n() + idx->second];
        prod *= b.num().pow(f.exp);
        if (b.den() != Poly(1)) den *= b.den().pow(f.exp);
      }
      Groups& groups = by_degree[t.degree()];
      auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == den; });
      if (it == groups.end()) {
        groups.emplace_back(den, PolyAccumulator{});
        it = std::prev(groups.end());
      }
      it->second.add(c.num() * prod);
    }
    Expr acc;
    for (unsigned d = 0; d <= D; ++d) {
      acc *= Expr(detQ);
      for (auto& [den, sum] : by_degree[d]) acc += Expr::fraction(sum.take(), den);
    }
    if (acc.is_zero()) throw Error("equation became identically zero under the transformation");
    // Least k with E * detQ^k polynomial in q: divide detQ out while exact.
    Poly num = acc.num();
    unsigned k = D;
    while (k > 0) {
      auto q = num.divide_exact(detQ);
      if (!q) break;
      num = std::move(*q);
      --k;
    }
    Expr e = Expr::fraction(num, acc.den()) * q_free.pow(static_cast<int>(k));
    eqs.push_back(e);
    out.exponents.push_back(k);
  }
  out.system = PdeSystem(tgt, std::move(eqs));
  return out;
}

VectorField pushforward_field(const PointTransformation& T, const VectorField& X) {
  const JetContext& src = T.source();
  VectorField Y = VectorField::zero(T.target());
  for (std::size_t i = 0; i < src.n(); ++i) Y.xi[i] = T.to_target(apply_field(src, X, T.Z()[i]));
  for (std::size_t a = 0; a < src.m(); ++a) Y.eta[a] = T.to_target(apply_field(src, X, T.W()[a]));
  return Y;
}

PointTransformation build_affine(const JetContext& source, const std::vector<Expr>& f, const std::vector<Symbol>& z,
                                 const std::vector<Symbol>& w) {
  const std::size_t n = source.n(), m = source.m();
  if (f.size() != n) throw Error("build_affine needs one function per independent variable");
  for (const Expr& fi : f) {
    for (Symbol s : fi.symbols()) {
      if (source.indep_index(s) || source.is_derivative(s)) throw Error("f must depend on u only (found '" + s.name() + "')");
      if (auto inf = source.functions().info(s)) {
        for (Symbol a : source.functions().args(inf->function)) {
          if (source.indep_index(a)) throw Error("f must depend on u only (function '" + inf->function.name() + "')");
        }
      }
    }
  }
  std::vector<Symbol> zs = z.empty() ? default_names("z", n) : z;
  std::vector<Symbol> ws = w.empty() ? default_names("w", m) : w;
  std::vector<Expr> Z, W, inv_x, inv_u;
  std::unordered_map<Symbol, Expr> u_to_w;
  for (std::size_t a = 0; a < m; ++a) u_to_w.emplace(source.u()[a], Expr(ws[a]));
  FunctionTable target_functions = rename_function_table(source.functions(), u_to_w);
  for (std::size_t i = 0; i < n; ++i) {
    Z.push_back(Expr(source.x()[i]) - f[i]);
    Expr fw = f[i].substitute(coordinate_substitution(f[i], u_to_w, source.functions(), target_functions));
    inv_x.push_back(Expr(zs[i]) + fw);
  }
  for (std::size_t a = 0; a < m; ++a) {
    W.push_back(Expr(source.u()[a]));
    inv_u.push_back(Expr(ws[a]));
  }
  JetContext target(zs, ws, source.params());
  return PointTransformation(source, target, Z, W, inv_x, inv_u, "affine");
}

PointTransformation hodograph(const JetContext& source, const std::vector<Symbol>& z, const std::vector<Symbol>& w) {
  if (source.n() != 2 || source.m() != 2) throw Error("hodograph transformation requires n = m = 2");
  std::vector<Symbol> zs = z.empty() ? default_names("z", 2) : z;
  std::vector<Symbol> ws = w.empty() ? default_names("w", 2) : w;
  std::vector<Expr> Z{Expr(source.u()[0]), Expr(source.u()[1])};
  std::vector<Expr> W{Expr(source.x()[0]), Expr(source.x()[1])};
  std::vector<Expr> inv_x{Expr(ws[0]), Expr(ws[1])};
  std::vector<Expr> inv_u{Expr(zs[0]), Expr(zs[1])};
  JetContext target(zs, ws, source.params());
  return PointTransformation(source, target, Z, W, inv_x, inv_u, "hodograph");
}

PointTransformation compose(const PointTransformation& T1, const PointTransformation& T2) {
  const JetContext& mid = T1.target();
  if (T2.source().x() != mid.x() || T2.source().u() != mid.u()) throw Error("compose: T2 must start where T1 ends");
  // Forward: substitute mid coordinates by T1's forward map.
  std::unordered_map<Symbol, Expr> fwd;
  for (std::size_t i = 0; i < mid.n(); ++i) fwd.emplace(mid.x()[i], T1.Z()[i]);
  for (std::size_t a = 0; a < mid.m(); ++a) fwd.emplace(mid.u()[a], T1.W()[a]);
  // Backward: substitute mid coordinates by T2's inverse.
  std::unordered_map<Symbol, Expr> bwd;
  for (std::size_t i = 0; i < mid.n(); ++i) bwd.emplace(mid.x()[i], T2.inverse_x()[i]);
  for (std::size_t a = 0; a < mid.m(); ++a) bwd.emplace(mid.u()[a], T2.inverse_u()[a]);
  const FunctionTable& src_ft = T1.source().functions();
  const FunctionTable& mid_ft = mid.functions();
  const FunctionTable& tgt_ft = T2.target().functions();
  std::vector<Expr> Z, W, inv_x, inv_u;
  for (const Expr& e : T2.Z()) Z.push_back(e.substitute(coordinate_substitution(e, fwd, mid_ft, src_ft)));
  for (const Expr& e : T2.W()) W.push_back(e.substitute(coordinate_substitution(e, fwd, mid_ft, src_ft)));
  for (const Expr& e : T1.inverse_x()) inv_x.push_back(e.substitute(coordinate_substitution(e, bwd, mid_ft, tgt_ft)));
  for (const Expr& e : T1.inverse_u()) inv_u.push_back(e.substitute(coordinate_substitution(e, bwd, mid_ft, tgt_ft)));
  return PointTransformation(T1.source(), T2.target(), Z, W, inv_x, inv_u, T1.label() + "+" + T2.label());
}

ModuloReduction reduce_modulo_linear(const PdeSystem& sys, const Expr& strip) {
  const JetContext& ctx = sys.context();
  auto degrees = degree_in_derivatives(sys);
  ModuloReduction out;
  Substitution elim;
  for (std::size_t s = 0; s < sys.size(); ++s) {
    if (degrees[s] != 1) continue;
    Expr e = elim.empty() ? sys.equations()[s] : sys.equations()[s].substitute(elim);
    std::optional<Symbol> pick;
    Expr coeff;
    for (Symbol d : ctx.derivatives()) {
      if (!e.contains(d)) continue;
      Expr c = e.diff(d);
      if (c.is_constant() && !c.is_zero() && e.num().degree(d) == 1) {
        pick = d;
        coeff = c;
      }
    }
    if (!pick) continue;
    Expr value = -(e - coeff * Expr(*pick)) / coeff;
    for (auto& [sym, v] : elim) v = v.substitute({{*pick, value}});
    elim[*pick] = value;
    out.eliminated.emplace_back(*pick, value);
  }
  Expr strip_r = elim.empty() ? strip : strip.substitute(elim);
  bool can_strip = false;
  for (Symbol s : strip_r.symbols())
    if (ctx.is_derivative(s)) can_strip = true;
  std::vector<Expr> eqs;
  for (std::size_t s = 0; s < sys.size(); ++s) {
    const Expr& eq = sys.equations()[s];
    if (degrees[s] <= 1 || elim.empty()) {
      eqs.push_back(eq);
      out.stripped.push_back(0);
      continue;
    }
    Expr e = eq.substitute(elim);
    unsigned k = 0;
    while (can_strip && !e.is_zero()) {
      Expr q = e / strip_r;
      if (!free_of_derivatives(ctx, q.den())) break;
      e = q;
      ++k;
    }
    eqs.push_back(e);
    out.stripped.push_back(k);
  }
  out.system = PdeSystem(ctx, std::move(eqs));
  return out;
}

// ------------------------------------------------------------ jet samples

namespace {

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-12, 12), den(1, 6);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

std::optional<Rational> eval(const Expr& e, const Valuation& v) { return e.evaluate(v); }

}  // namespace

JetSampleReport jet_sample_check(const PointTransformation& T, const PdeSystem& source, const TransformedSystem& target,
                                 std::size_t samples, std::uint64_t seed) {
  const JetContext& src = T.source();
  const JetContext& tgt = T.target();
  const std::size_t n = src.n(), m = src.m();
  JetSubstitution js = jet_transform(T);
  std::mt19937_64 rng(seed);
  JetSampleReport rep;

  // Source-side symbols needing values.
  std::vector<Symbol> base;
  auto collect = [&](const Expr& e) {
    for (Symbol s : e.symbols())
      if (!src.is_derivative(s) && !tgt.is_derivative(s)) base.push_back(s);
  };
  for (const Expr& e : source.equations()) collect(e);
  for (const Expr& e : T.Z()) collect(e);
  for (const Expr& e : T.W()) collect(e);
  for (std::size_t r = 0; r < js.M.rows(); ++r)
    for (std::size_t c = 0; c < js.M.cols(); ++c) collect(js.M(r, c));
  for (Symbol s : src.x()) base.push_back(s);
  for (Symbol s : src.u()) base.push_back(s);
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());

  std::size_t attempts = 0;
  while (rep.samples < samples && attempts < samples * 20) {
    ++attempts;
    Valuation sv;
    for (Symbol s : base) sv.set(s, random_rational(rng));
    std::vector<Rational> p(m * n);
    for (std::size_t k = 0; k < m * n; ++k) {
      p[k] = random_rational(rng);
      sv.set(src.derivatives()[k], p[k]);
    }
    // q = (W_x + W_u p)(Z_x + Z_u p)^{-1}, numerically.
    ExprMatrix A(n, n), B(m, n), Pm(m, n);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t i = 0; i < n; ++i) Pm(a, i) = Expr(p[a * n + i]);
    auto numeric = [&](const ExprMatrix& M) -> std::optional<ExprMatrix> {
      ExprMatrix out(M.rows(), M.cols());
      for (std::size_t r = 0; r < M.rows(); ++r)
        for (std::size_t c = 0; c < M.cols(); ++c) {
          auto v = eval(M(r, c), sv);
          if (!v) return std::nullopt;
          out(r, c) = Expr(*v);
        }
      return out;
    };
    auto zx = numeric(T.Zx()), zu = numeric(T.Zu()), wx = numeric(T.Wx()), wu = numeric(T.Wu());
    if (!zx || !zu || !wx || !wu) {
      ++rep.skipped;
      continue;
    }
    A = *zx + *zu * Pm;
    B = *wx + *wu * Pm;
    if (A.det().is_zero()) {
      ++rep.skipped;
      continue;
    }
    ExprMatrix Qm = B * A.inverse();

    Valuation tv;  // target point
    Valuation mv = sv;  // (x, u, q) point for det(M)
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      auto z = eval(T.Z()[i], sv);
      if (!z) ok = false; else tv.set(tgt.x()[i], *z);
    }
    for (std::size_t a = 0; a < m && ok; ++a) {
      auto w = eval(T.W()[a], sv);
      if (!w) ok = false; else tv.set(tgt.u()[a], *w);
    }
    if (!ok) {
      ++rep.skipped;
      continue;
    }
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t i = 0; i < n; ++i) {
        Rational q = Qm(a, i).constant_value();
        tv.set(tgt.deriv(a, i), q);
        mv.set(tgt.deriv(a, i), q);
      }
    for (Symbol s : base) {
      if (src.indep_index(s) || src.dep_index(s)) continue;
      if (auto r = T.rename_function_symbol(s)) {
        tv.set(*r, sv.get(s));
      } else {
        tv.set(s, sv.get(s));
      }
    }
    auto det = eval(js.clearing_factor, mv);
    if (!det || sgn(*det) == 0) {
      ++rep.skipped;
      continue;
    }
    bool sample_ok = true;
    bool singular = false;
    for (std::size_t s = 0; s < source.size(); ++s) {
      // Target symbols not yet bound (e.g. partials only present after the
      // transformation) are an error in the oracle setup.
      auto lhs = target.system.equations()[s].evaluate(tv);
      auto rhs = source.equations()[s].evaluate(sv);
      if (!lhs || !rhs) {
        singular = true;
        break;
      }
      Rational factor = 1;
      for (unsigned k = 0; k < target.exponents[s]; ++k) factor *= *det;
      if (*lhs != *rhs * factor) {
        sample_ok = false;
        if (rep.first_failure.empty()) {
          rep.first_failure = "equation " + std::to_string(s + 1) + ": target " + lhs->get_str() + " != source*det^k " +
                              Rational(*rhs * factor).get_str();
        }
      }
    }
    if (singular) {
      ++rep.skipped;
      continue;
    }
    ++rep.samples;
    if (sample_ok) ++rep.passed;
  }
  return rep;
}

std::optional<Expr> proportionality_factor(const JetContext& ctx, const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return std::nullopt;
  Expr c = a / b;
  for (Symbol s : c.symbols())
    if (ctx.is_derivative(s)) return std::nullopt;
  return c;
}

void classify_into(ReductionReport& rep, const PdeSystem& target) {
  rep.autonomous = is_autonomous(target);
  rep.homogeneity = homogeneity_degree(target);
  rep.degrees = degree_in_derivatives(target);
  rep.quasilinear = is_quasilinear(target);
}

ReductionReport verify_reduction(const PointTransformation& T, const PdeSystem& sys,
                                 const std::vector<VectorField>& symmetries) {
  ReductionReport rep;
  rep.transformed = apply(T, sys);
  classify_into(rep, rep.transformed.system);
  const JetContext& tgt = T.target();
  for (const auto& X : symmetries) rep.pushed.push_back(pushforward_field(T, X));
  if (!symmetries.empty()) {
    if (rep.pushed.size() != tgt.n() + 1) {
      rep.symmetries_canonical = false;
    } else {
      VectorField scaling = VectorField::zero(tgt);
      for (std::size_t i = 0; i < tgt.n(); ++i) {
        if (!(rep.pushed[i] == VectorField::translation(tgt, i))) rep.symmetries_canonical = false;
        scaling.xi[i] = Expr(tgt.x()[i]);
      }
      if (!(rep.pushed.back() == scaling)) rep.symmetries_canonical = false;
    }
  }
  return rep;
}

}  // namespace liereduce
