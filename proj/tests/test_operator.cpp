#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fracmems/operators.hpp"
#include "fracmems/linalg.hpp"
#include "fracmems/special.hpp"
#include "fracmems/psi.hpp"

using namespace fracmems;

namespace {

// compactly supported C^2 test profile (1-x^2)^3 (a + b x + c x^2)
Profile1D bump_profile(double a, double b, double c) {
  Profile1D f;
  f.lo = -1.0;
  f.hi = 1.0;
  f.value = [=](double x) {
    const double u = 1.0 - x * x;
    return u > 0.0 ? u * u * u * (a + b * x + c * x * x) : 0.0;
  };
  f.deriv = [=](double x) {
    const double u = 1.0 - x * x;
    const double v = a + b * x + c * x * x;
    const double vp = b + 2.0 * c * x;
    return 3.0 * u * u * (-2.0 * x) * v + u * u * u * vp;
  };
  f.deriv2 = [=](double x) {
    const double u = 1.0 - x * x;
    const double v = a + b * x + c * x * x;
    const double vp = b + 2.0 * c * x;
    return 6.0 * u * (4.0 * x * x) * v - 6.0 * u * u * v -
           12.0 * u * u * x * vp + u * u * u * 2.0 * c;
  };
  return f;
}

int nearest_node(const RadialGrid& g, double x) {
  int best = 0;
  double d = 1e300;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::fabs(g.nodes[i] - x) < d) {
      d = std::fabs(g.nodes[i] - x);
      best = static_cast<int>(i);
    }
  return best;
}

}  // namespace

TEST_CASE("normalization constants") {
  const auto p = FracParams::make(1, 0.5);
  CHECK(p.c_ns == doctest::Approx(1.0 / 3.14159265358979323846)
                      .epsilon(1e-12));  // 12 significant digits
  // formula cross-check at another (N, s)
  const auto q = FracParams::make(3, 0.75);
  const double expect = std::pow(2.0, 1.5) * std::pow(M_PI, -1.5) * 0.75 *
                        std::exp(std::lgamma(2.25) - std::lgamma(0.25));
  CHECK(q.c_ns == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(FracParams::make(1, 1.5), DomainError);
  CHECK_THROWS_AS(FracParams::make(4, 0.5), DomainError);
}

TEST_CASE("assembled matrix structure: symmetry, signs, SPD, DMP") {
  for (int dim : {1, 3}) {
    CAPTURE(dim);
    const double s = 0.6;
    const auto params = FracParams::make(dim, s);
    const auto grid = dim == 1 ? RadialGrid::interval(96, 2.0 / s)
                               : RadialGrid::ball(96, dim, 2.0 / s);
    const auto op = assemble(grid, params, 2);
    const auto& M = op.bilinear_form();
    const std::size_t n = grid->size();

    CHECK(M.relative_asymmetry() <= 1e-15);  // symmetric by construction
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(M.at(i, i) > 0.0);
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) CHECK(M.at(i, j) <= 1e-14 * M.at(i, i));
    }
    CHECK(linalg::is_spd(M));

    // operator row sums on the all-ones interior extension are positive
    std::vector<double> ones(n, 1.0);
    const auto a1 = op.apply(ones);
    for (double v : a1) CHECK(v > 0.0);

    // discrete maximum principle via the SPD solve
    linalg::Cholesky chol(M);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i)
      rhs[i] = U(rng) * grid->cell_weights[i];
    const auto u = chol.solve(rhs);
    double umax = 0.0;
    for (double v : u) umax = std::max(umax, std::fabs(v));
    for (double v : u) CHECK(v >= -1e-12 * umax);
  }
}

TEST_CASE("constant interior extension reproduces the exterior tail") {
  const double s = 0.5;
  const auto params = FracParams::make(1, s);
  const auto grid = RadialGrid::interval(512, 2.0 / s);
  const auto op = assemble(grid, params, 2);
  std::vector<double> ones(grid->size(), 3.0);
  const auto val = op.apply(ones);
  for (double xq : {-0.6, 0.2, 0.7}) {
    const int i = nearest_node(*grid, xq);
    const double x = grid->nodes[i];
    const double exact = 3.0 * params.c_ns / (2.0 * s) *
                         (std::pow(1.0 - x, -2.0 * s) +
                          std::pow(1.0 + x, -2.0 * s));
    CHECK(val[i] == doctest::Approx(exact).epsilon(0.01));
    CHECK(val[i] > 0.0);
  }
}

TEST_CASE("power profile (1-|x|^2)^s maps to a constant") {
  struct Case {
    int dim, n;
    double s, tol;
  };
  for (const Case c : {Case{1, 384, 0.5, 0.01}, Case{3, 128, 0.6, 0.015},
                       Case{2, 96, 0.4, 0.03}}) {
    CAPTURE(c.dim);
    const auto params = FracParams::make(c.dim, c.s);
    const auto grid = c.dim == 1
                          ? RadialGrid::interval(c.n, 2.0 / c.s)
                          : RadialGrid::ball(c.n, c.dim, 2.0 / c.s);
    const auto op = assemble(grid, params, 2);
    std::vector<double> phi(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
      const double r = grid->nodes[i];
      phi[i] = std::pow(1.0 - r * r, c.s);
    }
    const auto val = op.apply(phi);
    const double expect = special::getoor_constant(c.dim, c.s);
    // constancy on the inner half of the domain
    for (std::size_t i = 0; i < grid->size(); ++i) {
      const double dist = grid->boundary_distance(i);
      if (dist < 0.5) continue;
      CHECK(val[i] == doctest::Approx(expect).epsilon(c.tol));
    }
  }
}

TEST_CASE("mesh refinement improves smooth-profile accuracy by >= 1.8") {
  const double s = 0.5;
  const auto params = FracParams::make(1, s);
  const auto f = [&] {
    Profile1D f;
    f.lo = -1.0;
    f.hi = 1.0;
    f.value = [](double x) {
      const double u = 1.0 - x * x;
      return u > 0.0 ? std::cos(M_PI * x / 2.0) * u * u : 0.0;
    };
    f.deriv = [](double x) {
      const double u = 1.0 - x * x;
      return std::cos(M_PI * x / 2.0) * (-4.0 * x * u) -
             M_PI / 2.0 * std::sin(M_PI * x / 2.0) * u * u;
    };
    f.deriv2 = [](double x) {
      const double u = 1.0 - x * x;
      return std::cos(M_PI * x / 2.0) * (8.0 * x * x - 4.0 * u) +
             4.0 * M_PI * x * u * std::sin(M_PI * x / 2.0) -
             M_PI * M_PI / 4.0 * std::cos(M_PI * x / 2.0) * u * u;
    };
    return f;
  }();

  const int n = 255;
  const auto coarse = RadialGrid::interval(n, 2.0 / s);
  const auto fine = RadialGrid::interval(2 * n + 1, 2.0 / s);
  const auto opc = assemble(coarse, params, 2);
  const auto opf = assemble(fine, params, 2);
  auto sample = [&](const RadialGrid& g) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = f.value(g.nodes[i]);
    return v;
  };
  const auto vc = opc.apply(sample(*coarse));
  const auto vf = opf.apply(sample(*fine));

  double errc = 0.0, errf = 0.0;
  for (int k : {40, 90, 127, 160, 210}) {
    const double x = coarse->nodes[k];
    // coarse node k coincides with fine node 2k+1
    REQUIRE(std::fabs(fine->nodes[2 * k + 1] - x) <= 1e-14);
    const double exact = apply_pointwise(f, params, x, 1e-9);
    errc += std::pow(vc[k] - exact, 2);
    errf += std::pow(vf[2 * k + 1] - exact, 2);
  }
  CHECK(std::sqrt(errc / errf) >= 1.8);
}

TEST_CASE("assembled operator agrees with the mesh-free oracle") {
  const double s = 0.55;
  const auto params = FracParams::make(1, s);
  const int n = 127;
  const auto coarse = RadialGrid::interval(n, 2.0 / s);
  const auto fine = RadialGrid::interval(2 * n + 1, 2.0 / s);
  const auto opc = assemble(coarse, params, 2);
  const auto opf = assemble(fine, params, 2);

  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const double quad_tol = 1e-8;
  for (int trial = 0; trial < 3; ++trial) {
    const auto f = bump_profile(1.0 + coef(rng), coef(rng), coef(rng));
    std::vector<double> uc(coarse->size()), uf(fine->size());
    for (std::size_t i = 0; i < coarse->size(); ++i)
      uc[i] = f.value(coarse->nodes[i]);
    for (std::size_t i = 0; i < fine->size(); ++i)
      uf[i] = f.value(fine->nodes[i]);
    const auto vc = opc.apply(uc);
    const auto vf = opf.apply(uf);
    std::uniform_int_distribution<int> pick(10, n - 11);
    for (int t = 0; t < 10; ++t) {
      const int k = pick(rng);
      const double x = coarse->nodes[k];
      const double oracle = apply_pointwise(f, params, x, quad_tol);
      const double mesh_err = std::fabs(vf[2 * k + 1] - vc[k]);
      CAPTURE(x);
      CHECK(std::fabs(vf[2 * k + 1] - oracle) <=
            5.0 * (quad_tol + mesh_err));
    }
  }
}

TEST_CASE("pointwise operator scales like L^{-2s} on a stretched domain") {
  const double s = 0.7;
  const auto params = FracParams::make(1, s);
  const auto base = bump_profile(1.0, 0.2, -0.1);
  for (double L : {2.0, 4.0}) {
    // g(z) = f(2 z / L - 1) supported on (0, L)
    Profile1D g;
    g.lo = 0.0;
    g.hi = L;
    const double a = 2.0 / L;
    g.value = [=](double z) { return base.value(a * z - 1.0); };
    g.deriv = [=](double z) { return a * base.deriv(a * z - 1.0); };
    g.deriv2 = [=](double z) { return a * a * base.deriv2(a * z - 1.0); };
    const double x = 0.35;  // reference point in (-1,1)
    const double z = (x + 1.0) / a;
    const double lhs = apply_pointwise(g, params, z, 1e-8);
    const double rhs = std::pow(a, 2.0 * s) *
                       apply_pointwise(base, params, x, 1e-8);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
  }
}

TEST_CASE("half-line power profile matches the scaling identity") {
  const double s = 0.5, tau = 0.25;
  const auto params = FracParams::make(1, s);
  const double Z = 1000.0;
  Profile1D g;
  g.lo = 0.0;
  g.hi = Z;
  g.value = [=](double z) { return z > 0.0 ? std::pow(z, tau) : 0.0; };
  g.deriv = [=](double z) { return tau * std::pow(z, tau - 1.0); };
  g.deriv2 = [=](double z) {
    return tau * (tau - 1.0) * std::pow(z, tau - 2.0);
  };
  for (double l : {1.0, 2.0}) {
    const double got = apply_pointwise(g, params, l, 1e-9);
    const double expect = psi::halfline_value(s, tau, l);
    // truncating the support at Z removes a rigorously bounded tail
    const double trunc = params.c_ns * 1.5 *
                         std::pow(Z, tau - 2.0 * s) / (2.0 * s - tau);
    CHECK(std::fabs(got - expect) <= 1e-8 + trunc);
  }
}

TEST_CASE("barrier sign chart across orders (interval)") {
  for (double s : {0.3, 0.5, 0.75}) {
    CAPTURE(s);
    const auto params = FracParams::make(1, s);
    const auto plus = barrier_ratio(0.5 * s, params, 1e-3, 1e-1, 8, 1e-6);
    double mn = 1e300, mx = -1e300;
    for (const auto& b : plus) {
      CHECK(b.ratio > 0.0);
      mn = std::min(mn, b.ratio);
      mx = std::max(mx, b.ratio);
    }
    CHECK(mx / mn <= 50.0);
    // the inner ratio approaches c_{1,s} psi_s(tau)
    CHECK(plus.front().ratio ==
          doctest::Approx(params.c_ns * psi::psi(s, 0.5 * s).value)
              .epsilon(0.25));

    const auto minus = barrier_ratio(1.5 * s, params, 1e-3, 1e-1, 8, 1e-6);
    mn = 1e300;
    mx = -1e300;
    for (const auto& b : minus) {
      CHECK(b.ratio < 0.0);
      mn = std::min(mn, -b.ratio);
      mx = std::max(mx, -b.ratio);
    }
    CHECK(mx / mn <= 50.0);

    const auto crit = barrier_ratio(s, params, 1e-3, 1e-1, 8, 1e-6);
    double vmax = 0.0;
    for (const auto& b : crit) vmax = std::max(vmax, std::fabs(b.value));
    CHECK(vmax <= 50.0 * std::fabs(crit.back().value));
  }
}

TEST_CASE("log barrier ratio is positive, bounded, and trends to -psi'") {
  for (double s : {0.5, 0.75}) {
    CAPTURE(s);
    const auto params = FracParams::make(1, s);
    const auto r = log_barrier_ratio(params, 1e-3, 1e-1, 8, 1e-6);
    double mn = 1e300, mx = -1e300;
    for (const auto& b : r) {
      CHECK(b.ratio > 0.0);
      mn = std::min(mn, b.ratio);
      mx = std::max(mx, b.ratio);
    }
    CHECK(mx / mn <= 50.0);
    const double limit = -params.c_ns * psi::psi_prime(s, s).value;
    CHECK(r.front().ratio == doctest::Approx(limit).epsilon(0.15));
    // W_s itself matches rho^s ln(1/rho) in the boundary strip
    const auto prof = log_barrier(s);
    const double rho = std::exp(-1.0) * 0.05;
    CHECK(prof.g(rho) ==
          doctest::Approx(std::pow(rho, s) * std::log(1.0 / rho))
              .epsilon(1e-14));
  }
}

TEST_CASE("window and domain guards") {
  const auto params = FracParams::make(1, 0.5);
  CHECK_THROWS_AS(barrier_ratio(0.25, params, 1e-7, 1e-1, 4, 1e-6),
                  WindowTooClose);
  CHECK_THROWS_AS(barrier_ratio(1.2, params, 1e-3, 1e-1, 4, 1e-6),
                  DomainError);
  const auto f = bump_profile(1.0, 0.0, 0.0);
  CHECK_THROWS_AS(apply_pointwise(f, params, 1.5, 1e-8), DomainError);
}
