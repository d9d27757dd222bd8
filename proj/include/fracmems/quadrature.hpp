#pragma once

// Adaptive 1D quadrature: Gauss-Kronrod 7/15 with bisection refinement for
// smooth integrands, and tanh-sinh (double-exponential) panels for endpoint
// algebraic/log singularities. Both return a value together with an error
// estimate and throw NonConvergentQuadrature when the target cannot be met.

#include <functional>

#include "fracmems/errors.hpp"

namespace fracmems::quad {

struct Result {
  double value = 0.0;
  double est_error = 0.0;
  double abs_integral = 0.0;  // approximate integral of |f|, for roundoff floors
};

using Fn = std::function<double(double)>;

// Single Gauss-Kronrod 7/15 panel on [a,b].
Result gk15(const Fn& f, double a, double b);

struct Options {
  double abs_tol = 1e-12;
  double rel_floor = 0.0;    // extra tolerance as a fraction of int |f|
  int max_depth = 48;        // bisection depth per initial panel
  int max_intervals = 20000; // hard cap on refined panels
};

// Adaptive GK15 on [a,b]: bisects the worst panel until the summed error
// estimate meets abs_tol.
Result adaptive(const Fn& f, double a, double b, const Options& opt = {});

// Tanh-sinh rule on [a,b]; integrable endpoint singularities are fine.
// Level doubling stops once successive levels agree to abs_tol.
Result tanh_sinh(const Fn& f, double a, double b, double abs_tol = 1e-12,
                 int max_level = 12);

// exact integral of t^e over [a,b], 0 < a < b, with the log case |e+1|~0
// and cancellation-safe evaluation for small |e+1|.
double power_integral(double e, double a, double b);

}  // namespace fracmems::quad
