#include "liereduce/linear.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace liereduce {

Substitution LinearSolution::bindings() const {
  Substitution b;
  for (const auto& [s, e] : solution) b.emplace(s, e);
  return b;
}

Substitution LinearSolution::bindings_with_free(const Expr& free_value) const {
  Substitution fv;
  for (Symbol s : free) fv.emplace(s, free_value);
  Substitution b;
  for (const auto& [s, e] : solution) b.emplace(s, fv.empty() ? e : e.substitute(fv));
  for (Symbol s : free) b.emplace(s, free_value);
  return b;
}

LinearSolution solve_linear(const std::vector<Expr>& eqs, const std::vector<Symbol>& unknowns) {
  std::unordered_map<std::uint32_t, std::size_t> index;
  for (std::size_t j = 0; j < unknowns.size(); ++j) {
    if (!index.emplace(unknowns[j].id(), j).second) throw Error("duplicate unknown '" + unknowns[j].name() + "'");
  }
  auto is_unknown = [&](std::uint32_t id) { return index.contains(id); };
  std::vector<LinearRow> rows;
  rows.reserve(eqs.size());
  for (const Expr& e : eqs) {
    for (Symbol s : unknowns) {
      if (e.den().contains(s)) throw Error("nonlinear in unknown '" + s.name() + "'");
    }
    // The denominator is a nonzero field element: scale the row by it.
    LinearRow row;
    for (auto& [m, c] : coefficients_in(e.num(), is_unknown)) {
      if (m.degree() > 1) throw Error("nonlinear in unknown '" + Symbol::from_id(m.factors()[0].var).name() + "'");
      if (m.is_one()) {
        row.rhs = Expr(-c);
      } else {
        row.coeffs.emplace_back(index.at(m.factors()[0].var), Expr(c));
      }
    }
    rows.push_back(std::move(row));
  }
  return solve_linear_rows(std::move(rows), unknowns);
}

LinearSolution solve_linear_rows(std::vector<LinearRow> input, const std::vector<Symbol>& unknowns) {
  const std::size_t n = unknowns.size();
  struct Row {
    std::map<std::size_t, Expr> coeffs;
    Expr rhs;
    bool pivot = false;
  };
  std::vector<Row> rows;
  rows.reserve(input.size());
  for (auto& in : input) {
    Row r;
    for (auto& [j, c] : in.coeffs) {
      if (j >= n) throw Error("unknown index out of range");
      if (c.is_zero()) continue;
      auto [it, inserted] = r.coeffs.try_emplace(j, c);
      if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) r.coeffs.erase(it);
      }
    }
    r.rhs = std::move(in.rhs);
    rows.push_back(std::move(r));
  }

  std::vector<std::size_t> col_count(n, 0);
  for (const auto& r : rows)
    for (const auto& [j, c] : r.coeffs) ++col_count[j];

  std::vector<std::ptrdiff_t> pivot_row_of(n, -1);
  for (;;) {
    // Markowitz pivot choice; ties prefer numeric, then small entries.
    std::size_t best_row = SIZE_MAX, best_col = 0;
    std::tuple<std::size_t, int, std::size_t, std::size_t, std::size_t> best_key{};
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Row& r = rows[i];
      if (r.pivot || r.coeffs.empty()) continue;
      std::size_t rc = r.coeffs.size();
      for (const auto& [j, c] : r.coeffs) {
        auto key = std::make_tuple((rc - 1) * (col_count[j] - 1), c.is_constant() ? 0 : 1, c.size(), i, j);
        if (best_row == SIZE_MAX || key < best_key) {
          best_key = key;
          best_row = i;
          best_col = j;
        }
      }
    }
    if (best_row == SIZE_MAX) break;

    Row& pr = rows[best_row];
    pr.pivot = true;
    pivot_row_of[best_col] = static_cast<std::ptrdiff_t>(best_row);
    Expr pv = pr.coeffs.at(best_col);
    if (!(pv == Expr(1))) {
      for (auto& [j, c] : pr.coeffs) c = (j == best_col) ? Expr(1) : c / pv;
      pr.rhs = pr.rhs / pv;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == best_row) continue;
      Row& r = rows[i];
      auto it = r.coeffs.find(best_col);
      if (it == r.coeffs.end()) continue;
      Expr f = it->second;
      r.coeffs.erase(it);
      --col_count[best_col];
      for (const auto& [j, c] : pr.coeffs) {
        if (j == best_col) continue;
        auto [pos, inserted] = r.coeffs.try_emplace(j);
        if (inserted) ++col_count[j];
        pos->second -= f * c;
        if (pos->second.is_zero()) {
          r.coeffs.erase(pos);
          --col_count[j];
        }
      }
      if (!pr.rhs.is_zero()) r.rhs -= f * pr.rhs;
    }
  }

  LinearSolution out;
  for (const auto& r : rows) {
    if (!r.pivot && r.coeffs.empty() && !r.rhs.is_zero()) out.residuals.push_back(r.rhs);
  }
  out.consistent = out.residuals.empty();
  for (std::size_t j = 0; j < n; ++j) {
    if (pivot_row_of[j] < 0) out.free.push_back(unknowns[j]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (pivot_row_of[j] < 0) continue;
    const Row& r = rows[static_cast<std::size_t>(pivot_row_of[j])];
    Expr value = r.rhs;
    for (const auto& [k, c] : r.coeffs) {
      if (k != j) value -= c * Expr(unknowns[k]);
    }
    out.solution.emplace_back(unknowns[j], std::move(value));
  }
  return out;
}

// ------------------------------------------------------------ ExprMatrix

ExprMatrix ExprMatrix::identity(std::size_t n) {
  ExprMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Expr(1);
  return m;
}

ExprMatrix ExprMatrix::operator*(const ExprMatrix& o) const {
  if (cols_ != o.rows_) throw Error("matrix dimension mismatch");
  ExprMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < o.cols_; ++j) {
      Expr s;
      for (std::size_t k = 0; k < cols_; ++k) {
        if ((*this)(i, k).is_zero() || o(k, j).is_zero()) continue;
        s += (*this)(i, k) * o(k, j);
      }
      r(i, j) = s;
    }
  return r;
}

ExprMatrix ExprMatrix::operator+(const ExprMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix dimension mismatch");
  ExprMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
  return r;
}

ExprMatrix ExprMatrix::operator-(const ExprMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix dimension mismatch");
  ExprMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
  return r;
}

ExprMatrix ExprMatrix::scaled(const Expr& s) const {
  ExprMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * s;
  return r;
}

ExprMatrix ExprMatrix::transpose() const {
  ExprMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

ExprMatrix ExprMatrix::submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
  ExprMatrix r(rs.size(), cs.size());
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j) r(i, j) = (*this)(rs[i], cs[j]);
  return r;
}

ExprMatrix ExprMatrix::substitute(const Substitution& b) const {
  ExprMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i].substitute(b);
  return r;
}

namespace {

/// Laplace expansion along the first row; the matrices here are tiny.
Expr laplace(const ExprMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return Expr(1);
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Expr sum;
  std::vector<std::size_t> rows(n - 1);
  for (std::size_t i = 1; i < n; ++i) rows[i - 1] = i;
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j).is_zero()) continue;
    std::vector<std::size_t> cols;
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) cols.push_back(k);
    Expr term = m(0, j) * laplace(m.submatrix(rows, cols));
    if (j % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum;
}

}  // namespace

Expr ExprMatrix::det() const {
  if (rows_ != cols_) throw Error("determinant of a non-square matrix");
  if (rows_ <= 4) return laplace(*this);
  // Gaussian elimination over the field.
  ExprMatrix a = *this;
  Expr d(1);
  for (std::size_t c = 0; c < cols_; ++c) {
    std::size_t p = c;
    while (p < rows_ && a(p, c).is_zero()) ++p;
    if (p == rows_) return Expr();
    if (p != c) {
      for (std::size_t k = 0; k < cols_; ++k) std::swap(a(p, k), a(c, k));
      d = -d;
    }
    d *= a(c, c);
    for (std::size_t r = c + 1; r < rows_; ++r) {
      if (a(r, c).is_zero()) continue;
      Expr f = a(r, c) / a(c, c);
      for (std::size_t k = c; k < cols_; ++k) a(r, k) -= f * a(c, k);
    }
  }
  return d;
}

ExprMatrix ExprMatrix::adjugate() const {
  if (rows_ != cols_) throw Error("adjugate of a non-square matrix");
  const std::size_t n = rows_;
  ExprMatrix r(n, n);
  if (n == 1) {
    r(0, 0) = Expr(1);
    return r;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::size_t> rs, cs;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i) rs.push_back(k);
        if (k != j) cs.push_back(k);
      }
      Expr minor = submatrix(rs, cs).det();
      r(j, i) = ((i + j) % 2 == 0) ? minor : -minor;
    }
  }
  return r;
}

ExprMatrix ExprMatrix::inverse() const {
  Expr d = det();
  if (d.is_zero()) throw Error("singular matrix");
  return adjugate().scaled(Expr(1) / d);
}

std::size_t ExprMatrix::rank() const {
  ExprMatrix a = *this;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
    // Prefer the smallest nonzero pivot.
    std::size_t p = SIZE_MAX;
    for (std::size_t r = rank; r < rows_; ++r) {
      if (a(r, c).is_zero()) continue;
      if (p == SIZE_MAX || a(r, c).size() < a(p, c).size()) p = r;
    }
    if (p == SIZE_MAX) continue;
    if (p != rank)
      for (std::size_t k = 0; k < cols_; ++k) std::swap(a(p, k), a(rank, k));
    for (std::size_t r = rank + 1; r < rows_; ++r) {
      if (a(r, c).is_zero()) continue;
      Expr f = a(r, c) / a(rank, c);
      for (std::size_t k = c; k < cols_; ++k) a(r, k) -= f * a(rank, k);
    }
    ++rank;
  }
  return rank;
}

}  // namespace liereduce
