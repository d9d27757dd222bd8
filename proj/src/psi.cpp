#include "fracmems/psi.hpp"

#include <cmath>
#include <limits>

#include "fracmems/quadrature.hpp"
#include "fracmems/special.hpp"

namespace fracmems::psi {

namespace {

constexpr double kTc = 0.25;   // series region [0, kTc]
constexpr double kDelta = 0.1; // window around t = 1
constexpr double kT = 100.0;   // closed-form tail beyond kT

void check_domain(double s, double tau, double tol) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("order s must be in (0,1)");
  if (!(tau > 0.0 && tau < 2.0 * s))
    throw DomainError("exponent tau must be in (0, 2s)");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
}

// int_0^tc [2 - (1+t)^tau - (1-t)^tau] t^{-1-2s} dt via the even power
// series 2 - (1+t)^tau - (1-t)^tau = -2 sum_{k>=1} binom(tau,2k) t^{2k}.
quad::Result series_origin(double s, double tau, double tol) {
  double sum = 0.0;
  double last = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = -2.0 * special::binom(tau, 2 * k) *
                        std::pow(kTc, 2 * k - 2.0 * s) / (2 * k - 2.0 * s);
    sum += term;
    last = std::fabs(term);
    if (k >= 4 && last < tol * 0.01) break;
  }
  // Terms decay at least geometrically with ratio ~ kTc^2.
  return {sum, last * 2.0 * kTc * kTc / (1.0 - kTc * kTc)};
}

// Same region for the tau-derivative integrand.
quad::Result series_origin_prime(double s, double tau, double tol) {
  double sum = 0.0;
  double last = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = -2.0 * special::binom_dtau(tau, 2 * k) *
                        std::pow(kTc, 2 * k - 2.0 * s) / (2 * k - 2.0 * s);
    sum += term;
    last = std::fabs(term);
    if (k >= 4 && last < tol * 0.01) break;
  }
  return {sum, last * 2.0 * kTc * kTc / (1.0 - kTc * kTc)};
}

// int_0^delta v^tau (1-v)^{-1-2s} dv by expanding (1-v)^{-1-2s}.
quad::Result near_one_power(double s, double tau, double tol) {
  double sum = 0.0;
  double coeff = 1.0;  // binom(m+2s, m)
  double last = 0.0;
  for (int m = 0; m <= 400; ++m) {
    const double p = tau + m;
    const double term = coeff * std::pow(kDelta, p + 1.0) / (p + 1.0);
    sum += term;
    last = term;
    if (m >= 3 && term < tol * 0.01) break;
    coeff *= (m + 1.0 + 2.0 * s) / (m + 1.0);
  }
  return {sum, last * 0.5};
}

// int_0^delta v^tau ln(v) (1-v)^{-1-2s} dv, same expansion.
quad::Result near_one_power_log(double s, double tau, double tol) {
  double sum = 0.0;
  double coeff = 1.0;
  double last = 0.0;
  const double ld = std::log(kDelta);
  for (int m = 0; m <= 400; ++m) {
    const double p1 = tau + m + 1.0;
    const double term = coeff * std::pow(kDelta, p1) * (ld / p1 - 1.0 / (p1 * p1));
    sum += term;
    last = std::fabs(term);
    if (m >= 3 && last < tol * 0.01) break;
    coeff *= (m + 1.0 + 2.0 * s) / (m + 1.0);
  }
  return {sum, last * 0.5};
}

// int_T^inf [2 - (1+t)^tau] t^{-1-2s} dt in closed form.
quad::Result tail(double s, double tau, double tol) {
  double sum = std::pow(kT, -2.0 * s) / s;
  double last = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double beta = 2.0 * s + k - tau;
    const double term =
        special::binom(tau, k) * std::pow(kT, -beta) / beta;
    sum -= term;
    last = std::fabs(term);
    if (k >= 3 && last < tol * 0.01) break;
  }
  return {sum, last * 2.0 / kT};
}

// -int_T^inf (1+t)^tau ln(1+t) t^{-1-2s} dt in closed form.
quad::Result tail_prime(double s, double tau, double tol) {
  double sum = 0.0;
  double last = 0.0;
  const double lt = std::log(kT);
  for (int k = 0; k <= 200; ++k) {
    const double beta = 2.0 * s + k - tau;
    const double pw = std::pow(kT, -beta);
    const double term = special::binom_dtau(tau, k) * pw / beta +
                        special::binom(tau, k) * pw * (lt * beta + 1.0) /
                            (beta * beta);
    sum -= term;
    last = std::fabs(term);
    if (k >= 3 && last < tol * 0.01) break;
  }
  return {sum, last * 2.0 / kT};
}

void check_sign_chart(const PsiValue& v) {
  if (std::fabs(v.value) <= 2.0 * v.est_error) return;
  const bool want_positive = v.tau < v.s;
  if (v.tau == v.s) return;
  if ((v.value > 0.0) != want_positive)
    throw NumericalFault("psi sign chart violated at s=" +
                         std::to_string(v.s) + " tau=" + std::to_string(v.tau));
}

}  // namespace

PsiValue psi(double s, double tau, double tol) {
  check_domain(s, tau, tol);
  const double m2s = -1.0 - 2.0 * s;
  quad::Options opt;
  opt.abs_tol = tol / 8.0;

  const quad::Result p0 = series_origin(s, tau, tol);
  const quad::Result p1 = quad::adaptive(
      [&](double t) {
        return (2.0 - std::pow(1.0 + t, tau) - std::pow(1.0 - t, tau)) *
               std::pow(t, m2s);
      },
      kTc, 1.0 - kDelta, opt);
  // t = 1 - v: smooth part of the integrand over [1-delta, 1].
  const quad::Result p2a = quad::adaptive(
      [&](double v) {
        return (2.0 - std::pow(2.0 - v, tau)) * std::pow(1.0 - v, m2s);
      },
      0.0, kDelta, opt);
  const quad::Result p2b = near_one_power(s, tau, tol);
  // t = 1 + w over [1, 1+delta]; no |1-t|^tau term here.
  const quad::Result p3 = quad::adaptive(
      [&](double w) {
        return (2.0 - std::pow(2.0 + w, tau)) * std::pow(1.0 + w, m2s);
      },
      0.0, kDelta, opt);
  const quad::Result p4 = quad::adaptive(
      [&](double t) {
        return (2.0 - std::pow(1.0 + t, tau)) * std::pow(t, m2s);
      },
      1.0 + kDelta, kT, opt);
  const quad::Result p5 = tail(s, tau, tol);

  PsiValue out;
  out.s = s;
  out.tau = tau;
  out.value = p0.value + p1.value + p2a.value - p2b.value + p3.value +
              p4.value + p5.value;
  out.est_error = p0.est_error + p1.est_error + p2a.est_error +
                  p2b.est_error + p3.est_error + p4.est_error + p5.est_error;
  if (out.est_error > tol)
    throw NonConvergentQuadrature("psi: error estimate above tolerance");
  check_sign_chart(out);
  return out;
}

PsiValue psi_prime(double s, double tau, double tol) {
  check_domain(s, tau, tol);
  const double m2s = -1.0 - 2.0 * s;
  quad::Options opt;
  opt.abs_tol = tol / 8.0;

  const quad::Result p0 = series_origin_prime(s, tau, tol);
  const quad::Result p1 = quad::adaptive(
      [&](double t) {
        return -(std::pow(1.0 + t, tau) * std::log1p(t) +
                 std::pow(1.0 - t, tau) * std::log1p(-t)) *
               std::pow(t, m2s);
      },
      kTc, 1.0 - kDelta, opt);
  const quad::Result p2a = quad::adaptive(
      [&](double v) {
        return -std::pow(2.0 - v, tau) * std::log(2.0 - v) *
               std::pow(1.0 - v, m2s);
      },
      0.0, kDelta, opt);
  const quad::Result p2b = near_one_power_log(s, tau, tol);
  const quad::Result p3 = quad::adaptive(
      [&](double w) {
        return -std::pow(2.0 + w, tau) * std::log(2.0 + w) *
               std::pow(1.0 + w, m2s);
      },
      0.0, kDelta, opt);
  const quad::Result p4 = quad::adaptive(
      [&](double t) {
        return -std::pow(1.0 + t, tau) * std::log1p(t) * std::pow(t, m2s);
      },
      1.0 + kDelta, kT, opt);
  const quad::Result p5 = tail_prime(s, tau, tol);

  PsiValue out;
  out.s = s;
  out.tau = tau;
  out.value = p0.value + p1.value + p2a.value - p2b.value + p3.value +
              p4.value + p5.value;
  out.est_error = p0.est_error + p1.est_error + p2a.est_error +
                  p2b.est_error + p3.est_error + p4.est_error + p5.est_error;
  if (out.est_error > tol)
    throw NonConvergentQuadrature("psi_prime: error estimate above tolerance");
  return out;
}

double psi_root(double s, double tol) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("order s must be in (0,1)");
  const double qtol = std::min(tol * 0.1, 1e-11);
  auto f = [&](double tau) { return psi(s, tau, qtol).value; };

  double lo = 0.5 * s, hi = 1.5 * s;
  double flo = f(lo), fhi = f(hi);
  if (!(flo > 0.0 && fhi < 0.0)) {
    lo = 0.05 * s;
    hi = 1.95 * s;
    flo = f(lo);
    fhi = f(hi);
    if (!(flo > 0.0 && fhi < 0.0))
      throw BracketFailure("psi_root: no sign change in (0, 2s)");
  }
  // Plain bisection; the function is smooth and strictly decreasing here.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::fabs(fm) <= tol && hi - lo <= 1e-12 * s) return mid;
    if (fm > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * s)
      return 0.5 * (lo + hi);
  }
  return 0.5 * (lo + hi);
}

double halfline_value(double s, double tau, double l, double tol) {
  if (!(l > 0.0)) throw DomainError("halfline position must be positive");
  return special::c_ns(1, s) * std::pow(l, tau - 2.0 * s) *
         psi(s, tau, tol).value;
}

}  // namespace fracmems::psi
