#include "fracmems/pullin.hpp"

#include <algorithm>
#include <cmath>

#include "fracmems/special.hpp"

namespace fracmems {

namespace {

bool counts_converged(const IterationTrace& t) {
  return t.status == SolveStatus::Converged ||
         t.status == SolveStatus::SlowConverging;
}

}  // namespace

PullInResult bisect_pullin(const GreenOperator& green,
                           const MembraneProfile& a,
                           const BisectOptions& opt) {
  PullInResult out;
  out.kappa = a.kappa;
  out.gamma = a.gamma;
  out.s = green.op().params.s;
  out.dim = green.op().params.dim;
  out.grid_hash = green.grid()->hash();

  auto converged = [&](double lambda) {
    ++out.solver_calls;
    return counts_converged(iterate(green, a, lambda, opt.solve));
  };

  double lo = opt.lambda_init;
  while (!converged(lo)) {
    lo *= 0.25;
    if (lo < 1e-10)
      throw BracketExhausted(
          "no converged load found down to 1e-10; nonexistence regime");
  }
  double hi = std::max(opt.lambda_init, lo * 4.0);
  while (converged(hi)) {
    lo = hi;
    hi *= 4.0;
    if (hi > 1e8) throw BracketFailure("no touchdown found up to 1e8");
  }
  while ((hi - lo) / hi > opt.rel_tol) {
    const double mid = 0.5 * (lo + hi);
    if (converged(mid))
      lo = mid;
    else
      hi = mid;
  }
  out.lambda_lo = lo;
  out.lambda_hi = hi;
  return out;
}

double upper_bound_general(const GreenOperator& green,
                           const MembraneProfile& a) {
  const auto& g = *green.grid();
  const std::size_t n = g.size();
  std::vector<double> ones(n, 1.0);
  const auto g1 = green.apply(ones);

  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    num += g.cell_weights[i] * a.values.values[i];

  // denominator with a Cauchy check against dropping boundary cells
  const double rho_min = g.min_boundary_distance();
  double den = 0.0, den2 = 0.0, den4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double term = g.cell_weights[i] * g1[i] /
                        (a.values.values[i] * a.values.values[i]);
    den += term;
    const double d = g.boundary_distance(i);
    if (d >= 2.0 * rho_min) den2 += term;
    if (d >= 4.0 * rho_min) den4 += term;
  }
  if (!(std::fabs(den - den2) <= 0.05 * den &&
        std::fabs(den2 - den4) <= 0.05 * den))
    throw DivergentDenominator(
        "G[1]/a^2 quadrature fails its boundary refinement check");
  return num / den;
}

double upper_bound_ball(const GreenOperator& green, double kappa,
                        double gamma) {
  const auto& p = green.op().params;
  if (!(gamma <= 2.0 * p.s / 3.0 + 1e-12))
    throw DomainError("upper_bound_ball requires gamma <= 2s/3");
  const auto& g = *green.grid();
  std::vector<double> ones(g.size(), 1.0);
  const auto g1 = green.apply(ones);
  // cbar from G[1] at the node closest to the center
  std::size_t center = 0;
  for (std::size_t i = 1; i < g.size(); ++i)
    if (std::fabs(g.nodes[i]) < std::fabs(g.nodes[center])) center = i;
  const double r = g.nodes[center];
  const double cbar = g1[center] / std::pow(1.0 - r * r, p.s);
  const double half_n = 0.5 * p.dim;
  return kappa * kappa * kappa * special::beta(half_n, gamma + 1.0) /
         (cbar * special::beta(half_n, p.s - 2.0 * gamma + 1.0));
}

double lower_bound_ball(const GreenOperator& green, double kappa) {
  const auto& p = green.op().params;
  const auto& g = *green.grid();
  const std::size_t n = g.size();
  const double e = 2.0 * p.s / 3.0;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = std::pow(1.0 - g.nodes[i] * g.nodes[i], e);
  const auto Aw = green.op().apply(w);
  double cs = 1e300;
  for (std::size_t i = 0; i < n; ++i)
    cs = std::min(cs, Aw[i] * std::pow(1.0 - g.nodes[i] * g.nodes[i],
                                       2.0 * e));
  if (!(cs > 0.0))
    throw NonPositiveCs("supersolution constant not positive; the grid "
                        "cannot resolve the boundary layer");
  return 4.0 / 27.0 * cs * kappa * kappa * kappa;
}

ScanReport monotonicity_scan(const GreenOperator& green,
                             const std::vector<double>& kappas,
                             const std::vector<double>& gammas,
                             const BisectOptions& opt) {
  const double s = green.op().params.s;
  for (double gamma : gammas)
    if (!(gamma <= 2.0 * s / 3.0 + 1e-12))
      throw DomainError("monotonicity_scan requires gamma <= 2s/3");

  ScanReport report;
  for (double kappa : kappas)
    for (double gamma : gammas) {
      const auto a = MembraneProfile::semisphere(green.grid(), kappa, gamma);
      BisectOptions o = opt;
      o.lambda_init = opt.lambda_init * kappa * kappa * kappa;
      report.rows.push_back({kappa, gamma, bisect_pullin(green, a, o)});
    }

  auto mid = [](const PullInResult& r) {
    return 0.5 * (r.lambda_lo + r.lambda_hi);
  };
  auto disjoint = [](const PullInResult& lo, const PullInResult& hi) {
    return lo.lambda_hi < hi.lambda_lo || hi.lambda_hi < lo.lambda_lo;
  };
  for (const auto& r1 : report.rows)
    for (const auto& r2 : report.rows) {
      if (r1.kappa == r2.kappa && r1.gamma < r2.gamma) {
        // decreasing in gamma
        if (!disjoint(r2.result, r1.result)) {
          ++report.inconclusive_overlaps;
        } else if (!(mid(r1.result) > mid(r2.result))) {
          throw AssertionFailure("bracket midpoints not decreasing in gamma");
        }
      }
      if (r1.gamma == r2.gamma && r1.kappa < r2.kappa) {
        // increasing in kappa
        if (!disjoint(r1.result, r2.result)) {
          ++report.inconclusive_overlaps;
        } else if (!(mid(r2.result) > mid(r1.result))) {
          throw AssertionFailure("bracket midpoints not increasing in kappa");
        }
      }
    }
  return report;
}

}  // namespace fracmems
