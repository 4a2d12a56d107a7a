// Multivariate polynomial gcd over Q.
//
// Strategy: strip monomial content, reduce to a common variable set via
// contents, prove coprimality cheaply with modular images (p = 2^61 - 1),
// try exact division, and fall back to a recursive subresultant PRS.

#include <algorithm>
#include <random>

#include "liereduce/poly.hpp"

namespace liereduce {

namespace {

constexpr std::uint64_t kPrime = (std::uint64_t(1) << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(r & kPrime);
  std::uint64_t hi = static_cast<std::uint64_t>(r >> 61);
  std::uint64_t s = lo + hi;
  if (s >= kPrime) s -= kPrime;
  return s;
}

std::uint64_t addmod(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= kPrime ? s - kPrime : s;
}

std::uint64_t submod(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }

std::uint64_t powmod(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, b);
    b = mulmod(b, b);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a) { return powmod(a, kPrime - 2); }

/// Rational reduced mod p; nullopt when the denominator vanishes.
std::optional<std::uint64_t> reduce(const Rational& q) {
  std::uint64_t n = mpz_fdiv_ui(q.get_num_mpz_t(), kPrime);
  std::uint64_t d = mpz_fdiv_ui(q.get_den_mpz_t(), kPrime);
  if (d == 0) return std::nullopt;
  return mulmod(n, invmod(d));
}

using ModPoly = std::vector<std::uint64_t>;  // index = power

void trim(ModPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

/// Image of p in F_p[x] with every other variable evaluated at `point`.
std::optional<ModPoly> image(const Poly& p, Symbol x, const std::vector<std::uint64_t>& point) {
  ModPoly out(p.degree(x) + 1, 0);
  for (const auto& t : p.terms()) {
    auto c = reduce(t.coeff);
    if (!c) return std::nullopt;
    std::uint64_t v = *c;
    std::uint32_t ex = 0;
    for (const auto& f : t.mono.factors()) {
      if (f.var == x.id()) {
        ex = f.exp;
      } else {
        v = mulmod(v, powmod(point[f.var], f.exp));
      }
    }
    out[ex] = addmod(out[ex], v);
  }
  trim(out);
  return out;
}

ModPoly mod_rem(ModPoly a, const ModPoly& b) {
  std::uint64_t inv = invmod(b.back());
  while (a.size() >= b.size()) {
    std::uint64_t f = mulmod(a.back(), inv);
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = submod(a[shift + i], mulmod(f, b[i]));
    trim(a);
  }
  return a;
}

std::size_t mod_gcd_degree(ModPoly a, ModPoly b) {
  while (!b.empty()) {
    ModPoly r = mod_rem(std::move(a), b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.empty() ? 0 : a.size() - 1;
}

std::mt19937_64& rng() {
  static thread_local std::mt19937_64 gen(0x5eed5eedULL);
  return gen;
}

/// Upper bound on deg_x gcd(a, b) from a modular image with non-vanishing
/// leading coefficients; nullopt if no good point was found.
std::optional<std::size_t> image_gcd_degree(const Poly& a, const Poly& b, Symbol x) {
  std::uint32_t max_id = 0;
  for (const Poly* p : {&a, &b})
    for (const auto& t : p->terms())
      for (const auto& f : t.mono.factors()) max_id = std::max(max_id, f.var);
  const std::size_t da = a.degree(x), db = b.degree(x);
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<std::uint64_t> point(max_id + 1);
    for (auto& v : point) v = rng()() % kPrime;
    auto ia = image(a, x, point);
    auto ib = image(b, x, point);
    if (!ia || !ib) continue;
    if (ia->size() != da + 1 || ib->size() != db + 1) continue;
    return mod_gcd_degree(std::move(*ia), std::move(*ib));
  }
  return std::nullopt;
}

Poly normalized(const Poly& p) { return p.primitive(); }

Poly gcd_core(const Poly& a, const Poly& b);

/// gcd of `seed` with every coefficient of `p` viewed in the symbols `vars`.
Poly gcd_with_coefficients(Poly g, const Poly& p, const std::vector<Symbol>& vars) {
  auto in_set = [&](std::uint32_t id) {
    return std::any_of(vars.begin(), vars.end(), [&](Symbol s) { return s.id() == id; });
  };
  auto coeffs = coefficients_in(p, in_set);
  // Smallest coefficients first: cheap gcds collapse g quickly.
  std::sort(coeffs.begin(), coeffs.end(), [](const auto& l, const auto& r) { return l.second.size() < r.second.size(); });
  for (const auto& [m, c] : coeffs) {
    g = g.is_zero() ? normalized(c) : gcd_core(g, c);
    if (g.is_constant()) return Poly(1);
  }
  return g;
}

using UPoly = std::vector<Poly>;  // coefficients in x, index = power

void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Poly exact(const Poly& n, const Poly& d) {
  auto q = n.divide_exact(d);
  if (!q) throw Error("internal: inexact division in subresultant sequence");
  return *q;
}

Poly content_of(const UPoly& p) {
  Poly g;
  for (const auto& c : p) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? normalized(c) : gcd_core(g, c);
    if (g.is_constant()) return Poly(1);
  }
  return g;
}

UPoly divide_all(const UPoly& p, const Poly& d) {
  if (d.is_constant()) {
    UPoly out = p;
    if (!d.is_zero() && d.constant_value() != 1) {
      Rational inv = Rational(1) / d.constant_value();
      for (auto& c : out) c = c.scaled(inv);
    }
    return out;
  }
  UPoly out;
  out.reserve(p.size());
  for (const auto& c : p) out.push_back(exact(c, d));
  return out;
}

UPoly pseudo_remainder(UPoly a, const UPoly& b) {
  const std::size_t db = b.size() - 1;
  const Poly& lb = b.back();
  int e = static_cast<int>(a.size()) - static_cast<int>(db);
  while (a.size() >= b.size()) {
    Poly la = a.back();
    std::size_t shift = a.size() - b.size();
    for (auto& c : a) c = c * lb;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= la * b[i];
    trim(a);
    --e;
  }
  if (e > 0) {
    Poly f = lb.pow(static_cast<unsigned>(e));
    for (auto& c : a) c = c * f;
  }
  return a;
}

/// Subresultant PRS gcd of a and b in x (Cohen, Algorithm 3.3.1).
Poly prs_gcd(const Poly& pa, const Poly& pb, Symbol x) {
  UPoly A = to_univariate(pa, x), B = to_univariate(pb, x);
  if (A.size() < B.size()) std::swap(A, B);
  Poly ca = content_of(A), cb = content_of(B);
  Poly d = gcd_core(ca, cb);
  A = divide_all(A, ca);
  B = divide_all(B, cb);
  Poly g(1), h(1);
  for (;;) {
    std::size_t delta = A.size() - B.size();
    UPoly R = pseudo_remainder(A, B);
    if (R.empty()) break;
    if (R.size() == 1) {
      B = UPoly{Poly(1)};
      break;
    }
    A = std::move(B);
    Poly div = g * h.pow(static_cast<unsigned>(delta));
    B = divide_all(R, div);
    g = A.back();
    if (delta == 0) {
      // h unchanged
    } else if (delta == 1) {
      h = g;
    } else {
      h = exact(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
    }
  }
  UPoly pp = divide_all(B, content_of(B));
  return normalized(d * from_univariate(pp, x));
}

/// gcd of polynomials with trivial monomial content.
Poly gcd_core(const Poly& a, const Poly& b) {
  if (a.is_zero()) return normalized(b);
  if (b.is_zero()) return normalized(a);
  if (a.is_constant() || b.is_constant()) return Poly(1);

  Poly pa = normalized(a), pb = normalized(b);
  if (pa == pb) return pa;

  // Monomial content (only monomial factors can divide a monomial).
  Monomial ma = pa.monomial_content(), mb = pb.monomial_content();
  if (!ma.is_one() || !mb.is_one()) {
    Monomial mg = Monomial::gcd(ma, mb);
    Poly ra = pa, rb = pb;
    if (!ma.is_one()) ra = *pa.divide_exact(Poly::monomial(ma, 1));
    if (!mb.is_one()) rb = *pb.divide_exact(Poly::monomial(mb, 1));
    Poly core = gcd_core(ra, rb);
    return normalized(core.times_monomial(mg, 1));
  }
  if (pa.size() == 1 || pb.size() == 1) return Poly(1);

  auto va = pa.variables(), vb = pb.variables();
  std::vector<Symbol> only_a, only_b, common;
  std::set_difference(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(only_a));
  std::set_difference(vb.begin(), vb.end(), va.begin(), va.end(), std::back_inserter(only_b));
  std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(common));
  if (common.empty()) return Poly(1);
  if (!only_a.empty()) return gcd_with_coefficients(pb, pa, only_a);
  if (!only_b.empty()) return gcd_with_coefficients(pa, pb, only_b);

  // Cheap coprimality proof: an image gcd of degree 0 in some variable
  // shows the true gcd is free of it, so it divides every coefficient.
  Symbol best;
  std::size_t best_deg = SIZE_MAX;
  for (Symbol x : common) {
    auto dg = image_gcd_degree(pa, pb, x);
    if (!dg) continue;
    if (*dg == 0) {
      Poly g = gcd_with_coefficients(Poly{}, pa, {x});
      if (g.is_constant()) return Poly(1);
      return gcd_with_coefficients(g, pb, {x});
    }
    std::size_t cost = std::min(pa.degree(x), pb.degree(x));
    if (cost < best_deg) {
      best_deg = cost;
      best = x;
    }
  }

  if (pa.size() >= pb.size()) {
    if (pa.divide_exact(pb)) return pb;
  } else {
    if (pb.divide_exact(pa)) return pa;
  }

  if (best == Symbol{}) best = common.front();
  return prs_gcd(pa, pb, best);
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero()) return {};
  return gcd_core(a, b);
}

}  // namespace liereduce
