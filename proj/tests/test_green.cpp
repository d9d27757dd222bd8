#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fracmems/green.hpp"
#include "fracmems/special.hpp"

using namespace fracmems;

namespace {

GreenOperator make_green(int dim, double s, int n) {
  const auto params = FracParams::make(dim, s);
  const auto grid = dim == 1 ? RadialGrid::interval(n, 2.0 / s)
                             : RadialGrid::ball(n, dim, 2.0 / s);
  return GreenOperator(assemble(grid, params, 2));
}

GridFunction random_smooth_load(const std::shared_ptr<const RadialGrid>& g,
                                std::mt19937& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double a = 1.5 + U(rng), b = U(rng), c = U(rng);
  GridFunction f(g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double x = g->nodes[i];
    f.values[i] = a + b * x + c * std::cos(2.0 * x);
  }
  return f;
}

}  // namespace

TEST_CASE("G[1] is proportional to (1-|x|^2)^s") {
  for (int dim : {1, 3}) {
    CAPTURE(dim);
    const double s = 0.5;
    const auto green = make_green(dim, s, dim == 1 ? 256 : 128);
    const auto& g = *green.grid();
    std::vector<double> ones(g.size(), 1.0);
    const auto u = green.apply(ones);

    const double cbar = 1.0 / special::getoor_constant(dim, s);
    double lo = 1e300, hi = -1e300;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g.nodes[i];
      const double q = 1.0 - r * r;
      if (g.boundary_distance(i) < 1e-3) continue;
      const double ratio = u[i] / std::pow(q, s);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      const double lx = std::log(q), ly = std::log(u[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++m;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(slope == doctest::Approx(s).epsilon(0.04));  // exponent fit +- 0.02
    CHECK(hi / lo <= 1.02 / 0.98);                     // constant within 2%
    CHECK(0.5 * (hi + lo) == doctest::Approx(cbar).epsilon(0.02));
  }
}

TEST_CASE("DiscreteInverse is the exact algebraic inverse") {
  const auto green = make_green(1, 0.6, 128);
  const auto& g = *green.grid();
  GridFunction phi(green.grid());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double u = 1.0 - g.nodes[i] * g.nodes[i];
    phi.values[i] = u * u * u;
  }
  const auto Aphi = green.op().apply(phi);
  const auto back = green.apply(Aphi);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    num += g.cell_weights[i] * std::pow(back.values[i] - phi.values[i], 2);
    den += g.cell_weights[i] * phi.values[i] * phi.values[i];
  }
  CHECK(std::sqrt(num / den) <= 1e-8);
}

TEST_CASE("comparison principle for the discrete inverse") {
  const auto green = make_green(1, 0.45, 96);
  const auto& g = *green.grid();
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> f(g.size()), h(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      f[i] = U(rng);
      h[i] = f[i] + U(rng);  // h >= f >= 0
    }
    const auto uf = green.apply(f);
    const auto uh = green.apply(h);
    double scale = 0.0;
    for (double v : uh) scale = std::max(scale, std::fabs(v));
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(uf[i] >= -1e-12 * scale);
      CHECK(uh[i] - uf[i] >= -1e-12 * scale);
    }
  }
}

TEST_CASE("kernel symmetry and positivity at random pairs") {
  const auto params = FracParams::make(1, 0.7);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-0.95, 0.95);
  for (int t = 0; t < 20; ++t) {
    double x = U(rng), y = U(rng);
    if (std::fabs(x - y) < 1e-3) y += 0.1;
    const double gxy = green_kernel_1d(params, x, y);
    const double gyx = green_kernel_1d(params, y, x);
    CHECK(gxy > 0.0);
    CHECK(std::fabs(gxy - gyx) <= 1e-10 * std::fabs(gxy));
  }
  CHECK_THROWS_AS(green_kernel_1d(FracParams::make(2, 0.5), 0.1, 0.3),
                  KernelUnavailable);
}

TEST_CASE("kernel quadrature agrees with the discrete inverse") {
  std::mt19937 rng(11);
  // interval: five random smooth loads
  {
    const auto green = make_green(1, 0.5, 160);
    for (int t = 0; t < 5; ++t) {
      const auto f = random_smooth_load(green.grid(), rng);
      const auto ud = green.apply(f);
      const auto uk = green_apply_kernel(green.op().params, f, 1e-7);
      const double sup = ud.sup_norm();
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (green.grid()->boundary_distance(i) < 0.1) continue;
        CHECK(std::fabs(ud.values[i] - uk.values[i]) <= 0.05 * sup);
      }
    }
  }
  // ball: one load at modest resolution (the radial averaging is nested
  // quadrature and scales accordingly)
  {
    const auto green = make_green(3, 0.6, 48);
    const auto f = random_smooth_load(green.grid(), rng);
    const auto ud = green.apply(f);
    const auto uk = green_apply_kernel(green.op().params, f, 1e-6);
    const double sup = ud.sup_norm();
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (green.grid()->boundary_distance(i) < 0.15) continue;
      CHECK(std::fabs(ud.values[i] - uk.values[i]) <= 0.05 * sup);
    }
  }
}

TEST_CASE("two-sided boundary estimates in the three regimes") {
  const auto green = make_green(1, 0.5, 384);
  for (double tau : {0.2, 0.5, 0.8}) {
    CAPTURE(tau);
    const auto samples = green_two_sided(green, tau);
    double lo = 1e300, hi = -1e300;
    for (const auto& p : samples) {
      if (p.rho < 1e-3 || p.rho > 0.4) continue;
      CHECK(p.value > 0.0);
      lo = std::min(lo, p.ratio);
      hi = std::max(hi, p.ratio);
    }
    CHECK(hi / lo <= 20.0);
  }
}

TEST_CASE("blow-up ratio in the nonexistence regime") {
  const auto green = make_green(1, 0.6, 512);
  const std::vector<double> probes_small = {1e-1, 3.162e-2,
                                            1e-2, 3.162e-3, 1e-3};
  // strictly increasing toward the boundary
  const auto q = blowup_ratio(green, 0.5, probes_small);
  for (std::size_t i = 1; i < q.size(); ++i) CHECK(q[i].ratio > q[i - 1].ratio);

  // unbounded growth over a wider window, with the predicted exponent
  std::vector<double> probes_wide;
  for (int k = 0; k <= 8; ++k) probes_wide.push_back(std::pow(10.0, -1.0 - 0.5 * k));
  const auto qw = blowup_ratio(green, 0.5, probes_wide);
  CHECK(qw.back().ratio >= 10.0 * qw.front().ratio);
  // q ~ rho^{2s-3gamma}: fit on the ratio samples
  std::vector<RatioSample> ratios;
  for (const auto& p : qw) ratios.push_back({p.rho, p.ratio, 0.0});
  CHECK(fit_log_slope(ratios) == doctest::Approx(2 * 0.6 - 3 * 0.5).epsilon(0.34));

  // gamma below 2s/3: bounded (nonnegative growth exponent in rho)
  const auto qb = blowup_ratio(green, 0.35, probes_wide);
  std::vector<RatioSample> rb;
  for (const auto& p : qb) rb.push_back({p.rho, p.ratio, 0.0});
  CHECK(fit_log_slope(rb) >= -0.05);
  CHECK(qb.back().ratio <= 2.0 * qb.front().ratio);

  // another order: slope 2s - 3 gamma = -0.3 at s = 0.75, gamma = 0.6
  const auto green2 = make_green(1, 0.75, 512);
  const auto q2 = blowup_ratio(green2, 0.6, probes_wide);
  std::vector<RatioSample> r2;
  for (const auto& p : q2) r2.push_back({p.rho, p.ratio, 0.0});
  CHECK(fit_log_slope(r2) == doctest::Approx(2 * 0.75 - 3 * 0.6).epsilon(0.34));
}
