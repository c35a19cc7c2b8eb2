#pragma once

#include <optional>
#include <vector>

#include "kenv/rational.hpp"

namespace kenv {

using QVec = std::vector<Scalar>;
using QMat = std::vector<QVec>;  // row-major, rectangular

// Gauss-Jordan to reduced row echelon form. Returns the rank; pivot column
// indices go to *pivots when non-null.
int rref_inplace(QMat& m, std::vector<int>* pivots = nullptr);

int rank_of(QMat m);

// Basis of { v : m v = 0 }, deterministic (free variables in column order).
QMat kernel_basis(const QMat& m);

// One solution of m x = b, if any.
std::optional<QVec> solve(const QMat& m, const QVec& b);

// Incremental row space in echelon form. Used to build quotients and to
// test membership without recomputing full RREFs.
class RowSpan {
 public:
  explicit RowSpan(size_t width) : width_(width) {}

  // Reduces v against the rows collected so far (in place).
  void reduce(QVec& v) const;

  // Adds v if it is independent; returns true when the dimension grew.
  bool add(QVec v);

  size_t dim() const { return rows_.size(); }
  size_t width() const { return width_; }
  const QMat& rows() const { return rows_; }
  const std::vector<int>& pivot_cols() const { return pivot_cols_; }
  bool contains(QVec v) const;

 private:
  size_t width_;
  QMat rows_;                    // echelon, pivot = 1, pivots strictly increasing
  std::vector<int> pivot_cols_;  // parallel to rows_
};

// Exact Fourier-Motzkin feasibility for a small number of variables:
// finds phi with rows(a) . phi >= rhs componentwise. Intended for the
// handful-of-variables positivity systems used by the grading machinery.
std::optional<QVec> fourier_motzkin_solve(const QMat& a, const QVec& rhs);

}  // namespace kenv
