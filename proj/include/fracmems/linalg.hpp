#pragma once

// Small dense linear algebra on top of the dispatched kernels: row-major
// matrices, Cholesky factorization, and triangular solves. Desk-scale only
// (n <= a few thousand), everything double precision and deterministic.

#include <cstddef>
#include <vector>

#include "fracmems/errors.hpp"

namespace fracmems::linalg {

class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double* row(std::size_t i) { return a_.data() + i * n_; }
  const double* row(std::size_t i) const { return a_.data() + i * n_; }
  double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  const double* data() const { return a_.data(); }
  double* data() { return a_.data(); }

  std::vector<double> apply(const std::vector<double>& x) const;

  // max_ij |A_ij - A_ji| / max_ij |A_ij|
  double relative_asymmetry() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

// (A + A^T)/2
Matrix symmetrize(const Matrix& a);

// Lower-triangular Cholesky factor; keeps the transpose as well so both
// substitutions run on contiguous rows.
class Cholesky {
 public:
  // Throws SingularSolve if the matrix is not numerically SPD.
  explicit Cholesky(const Matrix& m);

  std::vector<double> solve(const std::vector<double>& b) const;
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> l_;   // row-major lower factor
  std::vector<double> lt_;  // row-major transpose of l_
};

// Convenience SPD probe (Cholesky succeeds).
bool is_spd(const Matrix& m);

}  // namespace fracmems::linalg
