#pragma once

// Discretization of the order-s singular integral operator with zero
// exterior values on the interval (-1,1) and on radial functions over the
// unit ball (dim 2, 3), plus a mesh-free pointwise evaluator used as the
// oracle for the assembled matrix, and the boundary-barrier ratio checks.
//
// Assembly: collocation on the graded grid. The hypersingular cell |y| < y0
// around each node is handled by a quadratic model of the target (exact
// kernel moment); outside it the piecewise-linear interpolant is integrated
// against the kernel, in closed form for dim 1 and via angular reduction
// for dim 2, 3. Row i of the collocation matrix C approximates the operator
// at node i; the stored bilinear form M = sym(diag(w) C) is exactly
// symmetric, and the operator application is diag(w)^{-1} M u.

#include <functional>
#include <memory>
#include <vector>

#include "fracmems/grid.hpp"
#include "fracmems/linalg.hpp"

namespace fracmems {

struct FracParams {
  double s = 0.5;
  int dim = 1;
  double c_ns = 0.0;  // normalization 2^{2s} pi^{-N/2} s G((N+2s)/2)/G(1-s)

  static FracParams make(int dim, double s);
};

// Closed-form profile on the interval, zero outside [lo, hi]; two
// derivatives are needed at evaluation points only.
struct Profile1D {
  double lo = -1.0;
  double hi = 1.0;
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  std::function<double(double)> deriv2;
};

// Closed-form radial profile on the unit ball, zero for r >= 1.
struct RadialProfile {
  std::function<double(double)> value;   // of r in [0, 1)
  std::function<double(double)> deriv;
  std::function<double(double)> deriv2;
};

// Profile given as a function of the boundary distance d in (0, 1]:
// the barriers d^tau and d^s log(1/d) with their C^2 interior extensions.
struct BoundaryProfile {
  std::function<double(double)> g, g1, g2;
};

// d^tau on d < delta0, quintic C^2 blend on [delta0, 1] flattening at the
// domain center (zero first and second derivative at d = 1).
// interior_height = 0 picks the profile's own center value; the tau > s
// barrier checks use a taller hump (the extension is free there and a short
// one leaves the sign collar smaller than the test window).
BoundaryProfile power_barrier(double tau, double delta0 = 0.45,
                              double interior_height = 0.0);

// d^s ln(1/d) near the boundary, same interior blend.
BoundaryProfile log_barrier(double s, double delta0 = 0.45);

Profile1D to_interval(const BoundaryProfile& b);
RadialProfile to_ball(const BoundaryProfile& b);

class OperatorMatrix {
 public:
  FracParams params;
  std::shared_ptr<const RadialGrid> grid;

  // Exactly symmetric bilinear-form matrix M.
  const linalg::Matrix& bilinear_form() const { return form_; }

  // Operator application diag(w)^{-1} M u (collocation values at nodes).
  std::vector<double> apply(const std::vector<double>& u) const;
  GridFunction apply(const GridFunction& u) const;

  friend OperatorMatrix assemble(std::shared_ptr<const RadialGrid> grid,
                                 const FracParams& params, int threads);

 private:
  linalg::Matrix form_;
};

// Assemble the operator on the grid. threads = 0 takes the value of the
// FRAC_MEMS_THREADS environment variable, defaulting to the hardware count.
// Throws SingularAssembly if a diagonal entry fails to be positive.
OperatorMatrix assemble(std::shared_ptr<const RadialGrid> grid,
                        const FracParams& params, int threads = 0);

// Mesh-free evaluation of the operator at one point by direct adaptive
// quadrature of the symmetrized difference; the oracle for assemble().
// Error <= tol or NonConvergentQuadrature.
double apply_pointwise(const Profile1D& f, const FracParams& params, double x,
                       double tol = 1e-8);
double apply_pointwise_radial(const RadialProfile& f, const FracParams& params,
                              double r, double tol = 1e-8);

struct BarrierSample {
  double rho;
  double value;   // operator value at boundary distance rho
  double ratio;
};

// Samples of the operator applied to the tau-power barrier over a boundary
// window, with ratio = value / rho^{tau-2s}.
std::vector<BarrierSample> barrier_ratio(double tau, const FracParams& params,
                                         double window_lo, double window_hi,
                                         int samples = 10, double tol = 1e-7);

// Samples for the log barrier; ratio = -value * rho^s.
std::vector<BarrierSample> log_barrier_ratio(const FracParams& params,
                                             double window_lo,
                                             double window_hi,
                                             int samples = 10,
                                             double tol = 1e-7);

int resolve_threads(int requested);

}  // namespace fracmems
