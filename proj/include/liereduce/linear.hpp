#pragma once

#include <vector>

#include "liereduce/expr.hpp"

namespace liereduce {

/// Result of solve_linear. `solution` lists each pivot unknown (in the order
/// of `unknowns`) as an expression in the free unknowns and the remaining
/// symbols. `residuals` are the nonzero unknown-free right-hand sides left
/// after elimination: the system is consistent iff there are none.
struct LinearSolution {
  bool consistent = true;
  std::vector<std::pair<Symbol, Expr>> solution;
  std::vector<Symbol> free;
  std::vector<Expr> residuals;

  /// Binding map for the pivot unknowns (free unknowns stay symbolic).
  Substitution bindings() const;
  /// Binding map with every free unknown replaced by `free_value`.
  Substitution bindings_with_free(const Expr& free_value) const;
};

/// Exact Gauss-Jordan elimination over the rational-function field in the
/// non-unknown symbols. Throws Error("nonlinear in unknown") if some
/// equation is not affine in the unknowns.
LinearSolution solve_linear(const std::vector<Expr>& eqs, const std::vector<Symbol>& unknowns);

/// A sparse linear system given directly by rows: sum_j coeff_j * x_j = rhs.
struct LinearRow {
  std::vector<std::pair<std::size_t, Expr>> coeffs;  // (unknown index, coefficient)
  Expr rhs;
};
LinearSolution solve_linear_rows(std::vector<LinearRow> rows, const std::vector<Symbol>& unknowns);

/// Dense matrix of expressions.
class ExprMatrix {
 public:
  ExprMatrix() = default;
  ExprMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static ExprMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Expr& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Expr& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  ExprMatrix operator*(const ExprMatrix& o) const;
  ExprMatrix operator+(const ExprMatrix& o) const;
  ExprMatrix operator-(const ExprMatrix& o) const;
  ExprMatrix scaled(const Expr& s) const;
  ExprMatrix transpose() const;
  ExprMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;
  ExprMatrix substitute(const Substitution& b) const;

  Expr det() const;
  /// Classical adjoint: adj(M) M = det(M) I.
  ExprMatrix adjugate() const;
  /// Inverse; throws Error("singular matrix") if det = 0.
  ExprMatrix inverse() const;
  /// Rank over the rational-function field.
  std::size_t rank() const;

  friend bool operator==(const ExprMatrix& a, const ExprMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Expr> data_;
};

}  // namespace liereduce
