#pragma once

// Inverse of the Dirichlet operator: a shared Cholesky factorization of the
// assembled bilinear form (DiscreteInverse), plus an independent route that
// integrates the closed-form ball kernel against the load
// (KernelQuadrature), and the two-sided boundary estimates built on them.

#include <memory>
#include <vector>

#include "fracmems/grid.hpp"
#include "fracmems/linalg.hpp"
#include "fracmems/operators.hpp"

namespace fracmems {

// rho^{min(s,tau)} away from the critical order, rho^s log(1/rho) at
// tau = s; constant past the rho = 1/2 clamp.
struct VarrhoProfile {
  enum class Kind { PowerMin, LogCritical };
  double tau = 0.0;
  double s = 0.5;
  Kind kind = Kind::PowerMin;

  static VarrhoProfile make(double tau, double s);
  double operator()(double rho) const;
};

class GreenOperator {
 public:
  explicit GreenOperator(OperatorMatrix op);

  const OperatorMatrix& op() const { return op_; }
  const std::shared_ptr<const RadialGrid>& grid() const { return op_.grid; }

  // solve of the discrete operator: exact algebraic inverse of op.apply
  std::vector<double> apply(const std::vector<double>& f) const;
  GridFunction apply(const GridFunction& f) const;

 private:
  OperatorMatrix op_;
  linalg::Cholesky chol_;
};

// Pointwise ball/interval kernel (Boggio form), symmetric in its arguments;
// dim 1 only. Throws KernelUnavailable for other dims.
double green_kernel_1d(const FracParams& params, double x, double y,
                       double tol = 1e-10);

// Load integrated against the closed-form kernel; f is interpolated
// piecewise-linearly from its nodes. dims 1, 2, 3 (radial averaging).
GridFunction green_apply_kernel(const FracParams& params,
                                const GridFunction& f, double tol = 1e-7);

struct RatioSample {
  double rho;
  double value;
  double ratio;
};

// G[rho^{tau-2s}] / varrho_tau at every node (assertions belong to the
// rho < 1/2 strip; interior values are reported with the clamped profile).
std::vector<RatioSample> green_two_sided(const GreenOperator& green,
                                         double tau);

// q = G[rho^{-2 gamma}] * rho^{-gamma} at the nodes closest to the probe
// boundary distances, ordered from the largest probe inward.
std::vector<RatioSample> blowup_ratio(const GreenOperator& green, double gamma,
                                      const std::vector<double>& probe_rhos);

// least-squares slope of log(value) against log(rho)
double fit_log_slope(const std::vector<RatioSample>& samples);

}  // namespace fracmems
