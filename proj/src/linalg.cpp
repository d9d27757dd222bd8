#include "fracmems/linalg.hpp"

#include <cmath>

#include "fracmems/kernels.hpp"

namespace fracmems::linalg {

std::vector<double> Matrix::apply(const std::vector<double>& x) const {
  std::vector<double> y(n_);
  kern::matvec(a_.data(), x.data(), y.data(), n_, n_);
  return y;
}

double Matrix::relative_asymmetry() const {
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      worst = std::max(worst, std::fabs(at(i, j) - at(j, i)));
      scale = std::max(scale, std::fabs(at(i, j)));
    }
  for (std::size_t i = 0; i < n_; ++i)
    scale = std::max(scale, std::fabs(at(i, i)));
  return scale > 0.0 ? worst / scale : 0.0;
}

Matrix symmetrize(const Matrix& a) {
  Matrix s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      s.at(i, j) = 0.5 * (a.at(i, j) + a.at(j, i));
  return s;
}

Cholesky::Cholesky(const Matrix& m) : n_(m.size()), l_(n_ * n_, 0.0) {
  for (std::size_t i = 0; i < n_; ++i) {
    double* li = l_.data() + i * n_;
    for (std::size_t j = 0; j <= i; ++j) {
      const double* lj = l_.data() + j * n_;
      double s = m.at(i, j) - kern::dot(li, lj, j);
      if (i == j) {
        if (!(s > 0.0))
          throw SingularSolve("Cholesky pivot " + std::to_string(i) +
                              " not positive");
        li[j] = std::sqrt(s);
      } else {
        li[j] = s / lj[j];
      }
    }
  }
  lt_.assign(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j <= i; ++j) lt_[j * n_ + i] = l_[i * n_ + j];
}

std::vector<double> Cholesky::solve(const std::vector<double>& b) const {
  std::vector<double> x(b);
  // L y = b
  for (std::size_t i = 0; i < n_; ++i) {
    const double* li = l_.data() + i * n_;
    x[i] = (x[i] - kern::dot(li, x.data(), i)) / li[i];
  }
  // L^T x = y
  for (std::size_t k = n_; k-- > 0;) {
    const double* lk = lt_.data() + k * n_;
    const double tail =
        kern::dot(lk + k + 1, x.data() + k + 1, n_ - k - 1);
    x[k] = (x[k] - tail) / lk[k];
  }
  return x;
}

bool is_spd(const Matrix& m) {
  try {
    Cholesky c(m);
    return true;
  } catch (const SingularSolve&) {
    return false;
  }
}

}  // namespace fracmems::linalg
