#pragma once

// Bracketing of the critical load by bisection on the convergence predicate
// of the monotone iteration, and the closed-form/quadrature bounds for the
// spherical-cap profile on the unit ball.

#include <cstdint>
#include <vector>

#include "fracmems/solver.hpp"

namespace fracmems {

struct PullInBounds {
  double upper_general = 0.0;
  double upper_ball = 0.0;
  double lower_ball = 0.0;
};

struct PullInResult {
  double lambda_lo = 0.0;  // largest tested lambda that converged
  double lambda_hi = 0.0;  // smallest tested lambda that did not
  PullInBounds bounds;
  double kappa = 0.0, gamma = 0.0, s = 0.0;
  int dim = 1;
  std::uint64_t grid_hash = 0;
  int solver_calls = 0;
};

struct BisectOptions {
  double lambda_init = 0.25;  // starting guess, expanded geometrically
  double rel_tol = 1e-3;
  SolveTols solve;
};

// Standard bisection on the Converged/Touchdown predicate; SlowConverging
// counts as converged so near-critical slowing does not shrink the bracket.
// Throws BracketExhausted when no load down to 1e-10 converges.
PullInResult bisect_pullin(const GreenOperator& green,
                           const MembraneProfile& a,
                           const BisectOptions& opt = {});

// Quadrature of (int a) / (int G[1]/a^2) on the grid; the denominator gets
// a Cauchy check against truncating the near-boundary cells.
double upper_bound_general(const GreenOperator& green,
                           const MembraneProfile& a);

// kappa^3 B(N/2, gamma+1) / (cbar B(N/2, s-2gamma+1)); cbar measured from
// G[1] at the node closest to the center.
double upper_bound_ball(const GreenOperator& green, double kappa,
                        double gamma);

// (4/27) c_s kappa^3 with c_s the measured infimum of
// A[(1-r^2)^{2s/3}] (1-r^2)^{4s/3} over the nodes.
double lower_bound_ball(const GreenOperator& green, double kappa);

struct ScanRow {
  double kappa, gamma;
  PullInResult result;
};

struct ScanReport {
  std::vector<ScanRow> rows;
  int inconclusive_overlaps = 0;
};

// Brackets for every (kappa, gamma) pair; asserts bracket midpoints are
// decreasing in gamma and increasing in kappa wherever brackets do not
// overlap. Overlapping comparisons are counted, not failed.
ScanReport monotonicity_scan(const GreenOperator& green,
                             const std::vector<double>& kappas,
                             const std::vector<double>& gammas,
                             const BisectOptions& opt = {});

}  // namespace fracmems
