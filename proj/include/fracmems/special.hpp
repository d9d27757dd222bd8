#pragma once

// Gamma-family constants and helpers shared across the solver.

#include <cstddef>
#include <cstdint>

namespace fracmems::special {

// Normalization of the singular-integral operator of order s in dimension N:
// 2^{2s} pi^{-N/2} s Gamma((N+2s)/2) / Gamma(1-s).
double c_ns(int dim, double s);

// Surface measure |S^{N-1}| of the unit sphere.
double sphere_area(int dim);

// Volume of the unit ball in R^N.
double ball_volume(int dim);

// Euler Beta via log-Gamma.
double beta(double x, double y);

// Value of the operator applied to (1-|x|^2)_+^s on the unit ball:
// the constant 2^{2s} Gamma(N/2+s) Gamma(1+s) / Gamma(N/2).
double getoor_constant(int dim, double s);

// Normalization of the Boggio ball kernel:
// Gamma(N/2) / (4^s pi^{N/2} Gamma(s)^2).
double boggio_constant(int dim, double s);

// Generalized binomial coefficient binom(tau, k) for real tau, and its
// derivative with respect to tau. Stable at integer tau.
double binom(double tau, int k);
double binom_dtau(double tau, int k);

// FNV-1a over raw doubles; used to fingerprint grids in manifests.
std::uint64_t fnv1a(const double* data, std::size_t n);

}  // namespace fracmems::special
