#pragma once

// Minimal solutions of the membrane deflection problem by the monotone
// fixed-point iteration v_n = lambda G[(a - v_{n-1})^{-2}], with touchdown
// detection, lambda-monotonicity and energy diagnostics.

#include <vector>

#include "fracmems/green.hpp"

namespace fracmems {

enum class ProfileForm { SemiSphere, Tabulated };

// Gap profile a with the two-sided boundary bounds
// kappa rho^gamma <= a <= c rho^gamma kept as metadata.
struct MembraneProfile {
  double kappa = 1.0;
  double gamma = 0.5;
  double upper_c = 1.0;
  ProfileForm form = ProfileForm::SemiSphere;
  GridFunction values;

  // a(x) = kappa (1 - |x|^2)^gamma on the grid; upper_c = kappa 2^gamma.
  static MembraneProfile semisphere(std::shared_ptr<const RadialGrid> grid,
                                    double kappa, double gamma);
  static MembraneProfile tabulated(GridFunction a, double kappa, double gamma);

  double max_value() const;
  void validate() const;  // throws DomainError if either bound fails
};

enum class SolveStatus { Converged, Touchdown, MaxIter, SlowConverging };

const char* to_string(SolveStatus s);

struct SolveTols {
  double step_rel = 1e-11;    // * max(a): sup-norm step for convergence
  double res_rel = 1e-8;      // * max(a): residual contract
  double touch_rel = 1e-10;   // * max(a): touchdown gap
  int max_iter = 20000;
};

struct IterationTrace {
  double lambda = 0.0;
  SolveStatus status = SolveStatus::MaxIter;
  std::vector<double> sup_diffs;  // per-step sup-norm differences
  GridFunction final;
  double residual = 0.0;  // sup |u - lambda G[(a-u)^{-2}]|
  double min_gap = 0.0;   // min (a - u)
  int iterations = 0;
};

// Runs the iteration from v = 0. Converged traces satisfy the residual
// contract and 0 <= u < a; Touchdown reports the last safe iterate.
IterationTrace iterate(const GreenOperator& green, const MembraneProfile& a,
                       double lambda, const SolveTols& tols = {});

struct GapCheck {
  bool ok = false;
  double worst_violation = 0.0;  // most negative margin found
  std::size_t worst_node = 0;
};

// Verifies u2 - u1 >= (lambda2 - lambda1) G[a^{-2}] - slack node-wise.
// Throws AssertionFailure when the inequality fails beyond slack.
GapCheck monotone_gap_check(const GreenOperator& green,
                            const MembraneProfile& a,
                            const IterationTrace& t1,
                            const IterationTrace& t2,
                            const SolveTols& tols = {});

struct EnergyReport {
  double dirichlet = 0.0;  // u^T M u
  double reaction = 0.0;   // sum w u/(a-u)^2
};

// Throws NonFiniteEnergy when the gap closed or values are not finite.
EnergyReport energy(const OperatorMatrix& op, const GridFunction& u,
                    double lambda, const MembraneProfile& a);

struct SupersolutionReport {
  bool ok = false;
  double worst_margin = 0.0;  // min over nodes of A w - lambda/(a-w)^2
};

// true iff A w >= lambda/(a-w)^2 - slack at all nodes; pre 0 < w < a.
SupersolutionReport supersolution_check(const OperatorMatrix& op,
                                        const GridFunction& w, double lambda,
                                        const MembraneProfile& a,
                                        const SolveTols& tols = {});

}  // namespace fracmems
