#pragma once

// The one-dimensional kernel
//   psi_s(tau) = int_0^inf [2 - (1+t)^tau - |1-t|^tau 1_{(0,1)}(t)]
//                t^{-1-2s} dt,  0 < tau < 2s,
// its tau-derivative, its unique zero (at tau = s), and the half-line
// scaling value c_{1,s} l^{tau-2s} psi_s(tau).
//
// The integrand cancels to O(t^{2-2s}) at t -> 0, so the term-by-term
// pieces are non-integrable for s >= 1/2; the bracket is expanded in an
// even power series there and integrated in closed form. The |1-t|^tau
// endpoint at t = 1 and the t -> inf tail are also handled analytically.

#include "fracmems/errors.hpp"

namespace fracmems::psi {

struct PsiValue {
  double s = 0.0;
  double tau = 0.0;
  double value = 0.0;
  double est_error = 0.0;
};

inline constexpr double kDefaultTol = 1e-10;

// psi_s(tau) with |error| <= tol. Throws DomainError outside
// 0 < s < 1, 0 < tau < 2s; NonConvergentQuadrature if tol is unreachable.
PsiValue psi(double s, double tau, double tol = kDefaultTol);

// d/dtau psi_s(tau), same error contract.
PsiValue psi_prime(double s, double tau, double tol = kDefaultTol);

// The unique zero of psi_s in (0, 2s); bracketed root finding, result
// satisfies |psi_s(root)| <= tol.
double psi_root(double s, double tol = 1e-11);

// c_{1,s} l^{tau-2s} psi_s(tau): the exact value of the order-s operator
// applied to t -> (t_+)^tau on the half line, evaluated at l > 0.
double halfline_value(double s, double tau, double l,
                      double tol = kDefaultTol);

}  // namespace fracmems::psi
