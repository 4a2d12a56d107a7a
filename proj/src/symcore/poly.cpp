#include "liereduce/poly.hpp"

#include <algorithm>
#include <numeric>

namespace liereduce {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(Symbol s, std::uint32_t exp) {
  Monomial m;
  if (exp == 0) return m;
  m.factors_.push_back({s.id(), exp});
  m.degree_ = exp;
  return m;
}

std::uint32_t Monomial::exponent(Symbol s) const {
  for (const auto& f : factors_) {
    if (f.var == s.id()) return f.exp;
    if (f.var > s.id()) break;
  }
  return 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  r.factors_.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin(), ae = factors_.end();
  auto b = other.factors_.begin(), be = other.factors_.end();
  while (a != ae && b != be) {
    if (a->var == b->var) {
      r.factors_.push_back({a->var, a->exp + b->exp});
      ++a, ++b;
    } else if (a->var < b->var) {
      r.factors_.push_back(*a++);
    } else {
      r.factors_.push_back(*b++);
    }
  }
  r.factors_.insert(r.factors_.end(), a, ae);
  r.factors_.insert(r.factors_.end(), b, be);
  r.degree_ = degree_ + other.degree_;
  return r;
}

bool Monomial::divides(const Monomial& other) const {
  if (degree_ > other.degree_) return false;
  auto b = other.factors_.begin(), be = other.factors_.end();
  for (const auto& f : factors_) {
    while (b != be && b->var < f.var) ++b;
    if (b == be || b->var != f.var || b->exp < f.exp) return false;
  }
  return true;
}

Monomial Monomial::quotient(const Monomial& divisor) const {
  Monomial r;
  auto d = divisor.factors_.begin(), de = divisor.factors_.end();
  for (const auto& f : factors_) {
    while (d != de && d->var < f.var) ++d;
    std::uint32_t sub = (d != de && d->var == f.var) ? d->exp : 0;
    if (f.exp > sub) r.factors_.push_back({f.var, f.exp - sub});
  }
  r.degree_ = degree_ - divisor.degree_;
  return r;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  Monomial r;
  auto i = a.factors_.begin(), ie = a.factors_.end();
  auto j = b.factors_.begin(), je = b.factors_.end();
  while (i != ie && j != je) {
    if (i->var == j->var) {
      auto e = std::min(i->exp, j->exp);
      r.factors_.push_back({i->var, e});
      r.degree_ += e;
      ++i, ++j;
    } else if (i->var < j->var) {
      ++i;
    } else {
      ++j;
    }
  }
  return r;
}

Monomial Monomial::without(Symbol s) const {
  Monomial r;
  for (const auto& f : factors_) {
    if (f.var == s.id()) continue;
    r.factors_.push_back(f);
    r.degree_ += f.exp;
  }
  return r;
}

std::size_t Monomial::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& f : factors_) {
    std::uint64_t k = (std::uint64_t(f.var) << 32) | f.exp;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    h ^= k + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

int Monomial::compare(const Monomial& a, const Monomial& b) {
  if (a.degree_ != b.degree_) return a.degree_ > b.degree_ ? 1 : -1;
  auto i = a.factors_.begin(), ie = a.factors_.end();
  auto j = b.factors_.begin(), je = b.factors_.end();
  for (; i != ie && j != je; ++i, ++j) {
    if (i->var != j->var) return i->var < j->var ? 1 : -1;
    if (i->exp != j->exp) return i->exp > j->exp ? 1 : -1;
  }
  if (i != ie) return 1;
  if (j != je) return -1;
  return 0;
}

// -------------------------------------------------------------------- Poly

Poly::Poly(long value) {
  if (value != 0) terms_.push_back({Monomial{}, Rational(value)});
}

Poly::Poly(const Rational& value) {
  if (sgn(value) != 0) terms_.push_back({Monomial{}, value});
}

Poly Poly::variable(Symbol s) { return monomial(Monomial::variable(s), 1); }

Poly Poly::monomial(Monomial m, Rational c) {
  Poly p;
  if (sgn(c) != 0) p.terms_.push_back({std::move(m), std::move(c)});
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return Monomial::compare(a.mono, b.mono) > 0; });
  Poly p;
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
      if (sgn(p.terms_.back().coeff) == 0) p.terms_.pop_back();
    } else if (sgn(t.coeff) != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

Rational Poly::constant_value() const {
  if (!is_constant()) throw Error("polynomial is not constant");
  return terms_.empty() ? Rational(0) : terms_[0].coeff;
}

Rational Poly::constant_term() const {
  if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coeff;
  return 0;
}

std::uint32_t Poly::total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

std::uint32_t Poly::degree(Symbol s) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exponent(s));
  return d;
}

bool Poly::contains(Symbol s) const {
  return std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.mono.contains(s); });
}

std::vector<Symbol> Poly::variables() const {
  std::vector<std::uint32_t> ids;
  for (const auto& t : terms_)
    for (const auto& f : t.mono.factors()) ids.push_back(f.var);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<Symbol> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(Symbol::from_id(id));
  return out;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

namespace {

template <bool Subtract>
Poly merge(const std::vector<Poly::Term>& a, const std::vector<Poly::Term>& b) {
  std::vector<Poly::Term> out;
  out.reserve(a.size() + b.size());
  auto i = a.begin(), ie = a.end();
  auto j = b.begin(), je = b.end();
  while (i != ie && j != je) {
    int c = Monomial::compare(i->mono, j->mono);
    if (c > 0) {
      out.push_back(*i++);
    } else if (c < 0) {
      out.push_back(Subtract ? Poly::Term{j->mono, -j->coeff} : *j);
      ++j;
    } else {
      Rational s = Subtract ? Rational(i->coeff - j->coeff) : Rational(i->coeff + j->coeff);
      if (sgn(s) != 0) out.push_back({i->mono, std::move(s)});
      ++i, ++j;
    }
  }
  for (; i != ie; ++i) out.push_back(*i);
  for (; j != je; ++j) out.push_back(Subtract ? Poly::Term{j->mono, -j->coeff} : *j);
  return Poly::from_sorted_terms(std::move(out));
}

}  // namespace

Poly Poly::operator+(const Poly& o) const {
  if (o.is_zero()) return *this;
  if (is_zero()) return o;
  return merge<false>(terms_, o.terms_);
}

Poly Poly::operator-(const Poly& o) const {
  if (o.is_zero()) return *this;
  if (is_zero()) return -o;
  return merge<true>(terms_, o.terms_);
}

Poly Poly::scaled(const Rational& c) const {
  if (sgn(c) == 0) return {};
  Poly r = *this;
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

Poly Poly::times_monomial(const Monomial& m, const Rational& c) const {
  if (sgn(c) == 0) return {};
  Poly r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coeff * c});
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  if (is_zero() || o.is_zero()) return {};
  if (o.terms_.size() == 1) return times_monomial(o.terms_[0].mono, o.terms_[0].coeff);
  if (terms_.size() == 1) return o.times_monomial(terms_[0].mono, terms_[0].coeff);
  const Poly& small = terms_.size() <= o.terms_.size() ? *this : o;
  const Poly& big = terms_.size() <= o.terms_.size() ? o : *this;
  PolyAccumulator acc;
  acc.reserve(std::min<std::size_t>(small.size() * big.size(), 1u << 20));
  Rational prod;
  for (const auto& s : small.terms_) {
    for (const auto& b : big.terms_) {
      mpq_mul(prod.get_mpq_t(), s.coeff.get_mpq_t(), b.coeff.get_mpq_t());
      acc.add(s.mono * b.mono, prod);
    }
  }
  return acc.take();
}

Poly Poly::pow(unsigned e) const {
  Poly result(1);
  Poly base = *this;
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
  if (d.is_zero()) throw Error("zero denominator");
  if (is_zero()) return Poly{};
  if (d.is_constant()) return scaled(Rational(1) / d.constant_value());
  const Term& lt = d.leading();
  if (d.terms_.size() == 1) {
    Poly q;
    q.terms_.reserve(terms_.size());
    Rational inv = Rational(1) / lt.coeff;
    for (const auto& t : terms_) {
      if (!lt.mono.divides(t.mono)) return std::nullopt;
      q.terms_.push_back({t.mono.quotient(lt.mono), t.coeff * inv});
    }
    return q;
  }
  if (d.total_degree() > total_degree()) return std::nullopt;
  for (const auto& f : lt.mono.factors()) {
    if (degree(Symbol::from_id(f.var)) < f.exp) return std::nullopt;
  }
  if (!lt.mono.divides(leading().mono)) return std::nullopt;
  // The trailing term of the quotient is fixed by the trailing terms.
  if (!d.terms_.back().mono.divides(terms_.back().mono)) return std::nullopt;

  std::map<Monomial, Rational, MonomialGreater> rem;
  for (const auto& t : terms_) rem.emplace_hint(rem.end(), t.mono, t.coeff);
  std::vector<Term> quot;
  Rational inv = Rational(1) / lt.coeff;
  Rational prod;
  while (!rem.empty()) {
    auto it = rem.begin();
    if (!lt.mono.divides(it->first)) return std::nullopt;
    Monomial qm = it->first.quotient(lt.mono);
    Rational qc = it->second * inv;
    rem.erase(it);
    for (std::size_t k = 1; k < d.terms_.size(); ++k) {
      const auto& t = d.terms_[k];
      mpq_mul(prod.get_mpq_t(), t.coeff.get_mpq_t(), qc.get_mpq_t());
      auto [pos, inserted] = rem.try_emplace(t.mono * qm);
      pos->second -= prod;
      if (sgn(pos->second) == 0) rem.erase(pos);
    }
    quot.push_back({std::move(qm), std::move(qc)});
  }
  Poly q;
  q.terms_ = std::move(quot);
  return q;
}

Poly Poly::diff(Symbol s) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    auto e = t.mono.exponent(s);
    if (e == 0) continue;
    Monomial m = t.mono.without(s);
    if (e > 1) m = m * Monomial::variable(s, e - 1);
    out.push_back({std::move(m), t.coeff * e});
  }
  // Differentiation is not order preserving in general.
  return from_terms(std::move(out));
}

Rational Poly::content() const {
  if (terms_.empty()) return 0;
  mpz_class num = 0, den = 1;
  for (const auto& t : terms_) {
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  Rational c(num, den);
  c.canonicalize();
  if (sgn(leading().coeff) < 0) c = -c;
  return c;
}

Poly Poly::primitive() const {
  if (terms_.empty()) return {};
  return scaled(Rational(1) / content());
}

Monomial Poly::monomial_content() const {
  if (terms_.empty()) return {};
  Monomial g = terms_[0].mono;
  for (std::size_t i = 1; i < terms_.size() && !g.is_one(); ++i) g = Monomial::gcd(g, terms_[i].mono);
  return g;
}

std::size_t Poly::hash() const {
  std::size_t h = terms_.size();
  for (const auto& t : terms_) {
    h ^= t.mono.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<long>{}(mpz_get_si(t.coeff.get_num_mpz_t())) + (h << 3);
  }
  return h;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

// --------------------------------------------------------- PolyAccumulator

void PolyAccumulator::add(const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = map_.try_emplace(m, c);
  if (!inserted) it->second += c;
}

void PolyAccumulator::add(const Poly& p) {
  for (const auto& t : p.terms()) add(t.mono, t.coeff);
}

void PolyAccumulator::add_product(const Poly& p, const Monomial& m, const Rational& c) {
  Rational prod;
  for (const auto& t : p.terms()) {
    mpq_mul(prod.get_mpq_t(), t.coeff.get_mpq_t(), c.get_mpq_t());
    add(t.mono * m, prod);
  }
}

Poly PolyAccumulator::take() {
  std::vector<Poly::Term> terms;
  terms.reserve(map_.size());
  for (auto& [m, c] : map_) {
    if (sgn(c) != 0) terms.push_back({m, std::move(c)});
  }
  map_.clear();
  return Poly::from_terms(std::move(terms));
}

// ------------------------------------------------------ univariate helpers

std::vector<Poly> to_univariate(const Poly& p, Symbol x) {
  std::vector<std::vector<Poly::Term>> buckets(p.degree(x) + 1);
  for (const auto& t : p.terms()) {
    auto e = t.mono.exponent(x);
    buckets[e].push_back({e ? t.mono.without(x) : t.mono, t.coeff});
  }
  std::vector<Poly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(Poly::from_terms(std::move(b)));
  return out;
}

Poly from_univariate(const std::vector<Poly>& coeffs, Symbol x) {
  PolyAccumulator acc;
  for (std::size_t e = 0; e < coeffs.size(); ++e) {
    acc.add_product(coeffs[e], Monomial::variable(x, static_cast<std::uint32_t>(e)), 1);
  }
  return acc.take();
}

// ---------------------------------------------------------------- Valuation

void Valuation::set(Symbol s, Rational value) {
  if (values_.size() <= s.id()) values_.resize(s.id() + 1);
  values_[s.id()] = std::move(value);
}

bool Valuation::has(Symbol s) const { return s.id() < values_.size() && values_[s.id()].has_value(); }

const Rational& Valuation::get(Symbol s) const {
  if (!has(s)) throw Error("no value bound for symbol '" + s.name() + "'");
  return *values_[s.id()];
}

std::vector<Symbol> Valuation::symbols() const {
  std::vector<Symbol> out;
  for (std::uint32_t i = 0; i < values_.size(); ++i)
    if (values_[i]) out.push_back(Symbol::from_id(i));
  return out;
}

Rational evaluate(const Poly& p, const Valuation& v) {
  Rational sum = 0, term, power;
  for (const auto& t : p.terms()) {
    term = t.coeff;
    for (const auto& f : t.mono.factors()) {
      const Rational& base = v.get(Symbol::from_id(f.var));
      mpz_pow_ui(power.get_num_mpz_t(), base.get_num_mpz_t(), f.exp);
      mpz_pow_ui(power.get_den_mpz_t(), base.get_den_mpz_t(), f.exp);
      term *= power;
    }
    sum += term;
  }
  return sum;
}

}  // namespace liereduce
