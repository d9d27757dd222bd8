#include "fracmems/solver.hpp"

#include <algorithm>
#include <cmath>

#include "fracmems/kernels.hpp"

namespace fracmems {

MembraneProfile MembraneProfile::semisphere(
    std::shared_ptr<const RadialGrid> grid, double kappa, double gamma) {
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma out of (0,1)");
  MembraneProfile a;
  a.kappa = kappa;
  a.gamma = gamma;
  a.upper_c = kappa * std::pow(2.0, gamma);
  a.form = ProfileForm::SemiSphere;
  a.values = GridFunction(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double r = grid->nodes[i];
    a.values.values[i] = kappa * std::pow(1.0 - r * r, gamma);
  }
  a.validate();
  return a;
}

MembraneProfile MembraneProfile::tabulated(GridFunction values, double kappa,
                                           double gamma) {
  MembraneProfile a;
  a.kappa = kappa;
  a.gamma = gamma;
  a.form = ProfileForm::Tabulated;
  a.values = std::move(values);
  double c = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    c = std::max(c, a.values.values[i] /
                        std::pow(a.values.grid->rho(i), gamma));
  a.upper_c = std::max(c, kappa);
  a.validate();
  return a;
}

double MembraneProfile::max_value() const {
  double m = 0.0;
  for (double v : values.values) m = std::max(m, v);
  return m;
}

void MembraneProfile::validate() const {
  values.check_finite("membrane profile");
  const auto& g = *values.grid;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double floor = kappa * std::pow(g.rho(i), gamma);
    const double cap = upper_c * std::pow(g.rho(i), gamma);
    if (values.values[i] < floor * (1.0 - 1e-12))
      throw DomainError("membrane profile violates the lower gap bound");
    if (values.values[i] > cap * (1.0 + 1e-12))
      throw DomainError("membrane profile violates the upper gap bound");
  }
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged:
      return "Converged";
    case SolveStatus::Touchdown:
      return "Touchdown";
    case SolveStatus::SlowConverging:
      return "SlowConverging";
    default:
      return "MaxIter";
  }
}

IterationTrace iterate(const GreenOperator& green, const MembraneProfile& a,
                       double lambda, const SolveTols& tols) {
  if (!(lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
  if (a.values.grid != green.grid())
    throw DomainError("profile and operator live on different grids");
  const std::size_t n = green.grid()->size();
  const double amax = a.max_value();
  const double step_tol = tols.step_rel * amax;
  const double touch_eps = tols.touch_rel * amax;

  IterationTrace trace;
  trace.lambda = lambda;
  trace.final = GridFunction(green.grid());
  if (lambda == 0.0) {
    trace.status = SolveStatus::Converged;
    trace.min_gap = kern::min_gap(a.values.values.data(),
                                  trace.final.values.data(), n);
    return trace;
  }

  std::vector<double> v(n, 0.0), rhs(n);
  const double* av = a.values.values.data();
  for (int it = 0; it < tols.max_iter; ++it) {
    trace.min_gap = kern::min_gap(av, v.data(), n);
    if (trace.min_gap <= touch_eps) {
      trace.status = SolveStatus::Touchdown;
      trace.final.values = v;
      trace.iterations = it;
      return trace;
    }
    kern::inv_sq_scale(lambda, av, v.data(), rhs.data(), n);
    std::vector<double> next = green.apply(rhs);
    for (double x : next)
      if (!std::isfinite(x))
        throw NumericalFault("iterate: non-finite iterate");
    const double diff = kern::sup_abs_diff(next.data(), v.data(), n);
    trace.sup_diffs.push_back(diff);
    // monotone by the comparison structure; tolerate solve roundoff only
    for (std::size_t i = 0; i < n; ++i)
      if (next[i] < v[i] - 1e-13 * std::max(1.0, amax))
        throw NumericalFault("iterate: monotonicity lost");
    v.swap(next);
    trace.iterations = it + 1;
    if (diff <= step_tol) {
      trace.final.values = v;
      trace.min_gap = kern::min_gap(av, v.data(), n);
      if (trace.min_gap <= touch_eps) {
        trace.status = SolveStatus::Touchdown;
        return trace;
      }
      // residual of the fixed point after one more application
      kern::inv_sq_scale(lambda, av, v.data(), rhs.data(), n);
      const auto again = green.apply(rhs);
      trace.residual = kern::sup_abs_diff(again.data(), v.data(), n);
      trace.status = trace.residual <= tols.res_rel * amax
                         ? SolveStatus::Converged
                         : SolveStatus::MaxIter;
      return trace;
    }
  }
  trace.final.values = v;
  trace.min_gap = kern::min_gap(av, v.data(), n);
  kern::inv_sq_scale(lambda, av, v.data(), rhs.data(), n);
  const auto again = green.apply(rhs);
  trace.residual = kern::sup_abs_diff(again.data(), v.data(), n);
  // near-critical slowing: monotone decreasing step sizes with a positive
  // gap classify as slow convergence rather than touchdown
  bool decreasing = trace.min_gap > touch_eps &&
                    trace.sup_diffs.size() >= 100;
  if (decreasing) {
    const std::size_t m = trace.sup_diffs.size();
    for (std::size_t i = m - 100; i + 1 < m; ++i)
      if (trace.sup_diffs[i + 1] > trace.sup_diffs[i]) {
        decreasing = false;
        break;
      }
  }
  trace.status =
      decreasing ? SolveStatus::SlowConverging : SolveStatus::MaxIter;
  return trace;
}

GapCheck monotone_gap_check(const GreenOperator& green,
                            const MembraneProfile& a,
                            const IterationTrace& t1,
                            const IterationTrace& t2,
                            const SolveTols& tols) {
  if (t1.final.grid != t2.final.grid)
    throw DomainError("gap check requires a common grid");
  if (!(t1.lambda <= t2.lambda))
    throw DomainError("gap check expects lambda1 <= lambda2");
  const std::size_t n = t1.final.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i)
    f[i] = 1.0 / (a.values.values[i] * a.values.values[i]);
  const auto base = green.apply(f);
  const double slack = 10.0 * tols.res_rel * a.max_value();
  GapCheck out;
  out.ok = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double margin = (t2.final.values[i] - t1.final.values[i]) -
                          (t2.lambda - t1.lambda) * base[i] + slack;
    if (margin < worst) {
      worst = margin;
      out.worst_node = i;
    }
  }
  out.worst_violation = worst;
  if (worst < 0.0) {
    out.ok = false;
    throw AssertionFailure("monotone gap violated at node " +
                           std::to_string(out.worst_node));
  }
  return out;
}

EnergyReport energy(const OperatorMatrix& op, const GridFunction& u,
                    double lambda, const MembraneProfile& a) {
  (void)lambda;
  const std::size_t n = u.size();
  const auto& w = op.grid->cell_weights;
  EnergyReport out;
  std::vector<double> Mu(n);
  kern::matvec(op.bilinear_form().data(), u.values.data(), Mu.data(), n, n);
  out.dirichlet = kern::dot(u.values.data(), Mu.data(), n);
  for (std::size_t i = 0; i < n; ++i) {
    const double gap = a.values.values[i] - u.values[i];
    if (!(gap > 0.0))
      throw NonFiniteEnergy("energy: gap closed at node " +
                            std::to_string(i));
    out.reaction += w[i] * u.values[i] / (gap * gap);
  }
  if (!std::isfinite(out.dirichlet) || !std::isfinite(out.reaction))
    throw NonFiniteEnergy("energy: non-finite integrals");
  return out;
}

SupersolutionReport supersolution_check(const OperatorMatrix& op,
                                        const GridFunction& w, double lambda,
                                        const MembraneProfile& a,
                                        const SolveTols& tols) {
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!(w.values[i] > 0.0 && w.values[i] < a.values.values[i]))
      throw DomainError("supersolution candidate must satisfy 0 < w < a");
  const auto Aw = op.apply(w.values);
  const double slack = 10.0 * tols.res_rel * a.max_value();
  SupersolutionReport out;
  out.worst_margin = 1e300;
  for (std::size_t i = 0; i < n; ++i) {
    const double gap = a.values.values[i] - w.values[i];
    const double margin = Aw[i] - lambda / (gap * gap);
    out.worst_margin = std::min(out.worst_margin, margin);
  }
  out.ok = out.worst_margin >= -slack;
  return out;
}

}  // namespace fracmems
