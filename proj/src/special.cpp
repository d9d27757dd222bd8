#include "fracmems/special.hpp"

#include <cmath>
#include <cstring>

namespace fracmems::special {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double c_ns(int dim, double s) {
  return std::pow(2.0, 2.0 * s) * std::pow(kPi, -0.5 * dim) * s *
         std::exp(std::lgamma(0.5 * (dim + 2.0 * s)) - std::lgamma(1.0 - s));
}

double sphere_area(int dim) {
  // |S^{N-1}| = 2 pi^{N/2} / Gamma(N/2)
  return 2.0 * std::pow(kPi, 0.5 * dim) / std::exp(std::lgamma(0.5 * dim));
}

double ball_volume(int dim) { return sphere_area(dim) / dim; }

double beta(double x, double y) {
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

double getoor_constant(int dim, double s) {
  return std::pow(2.0, 2.0 * s) *
         std::exp(std::lgamma(0.5 * dim + s) + std::lgamma(1.0 + s) -
                  std::lgamma(0.5 * dim));
}

double boggio_constant(int dim, double s) {
  return std::exp(std::lgamma(0.5 * dim) - 2.0 * std::lgamma(s)) /
         (std::pow(4.0, s) * std::pow(kPi, 0.5 * dim));
}

double binom(double tau, int k) {
  double p = 1.0;
  for (int j = 0; j < k; ++j) p *= (tau - j) / (j + 1);
  return p;
}

double binom_dtau(double tau, int k) {
  // d/dtau prod_j (tau - j)/k! = sum_i prod_{j != i} (tau - j) / k!
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    double p = 1.0;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      p *= (tau - j);
    }
    sum += p;
  }
  double fact = 1.0;
  for (int j = 2; j <= k; ++j) fact *= j;
  return sum / fact;
}

std::uint64_t fnv1a(const double* data, std::size_t n) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, &data[i], sizeof(bits));
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

}  // namespace fracmems::special
