#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracmems/pullin.hpp"
#include "fracmems/solver.hpp"

using namespace fracmems;

namespace {

struct Setup {
  GreenOperator green;
  MembraneProfile a;
  PullInResult pullin;
};

// one shared scenario: s = 0.75, interval, kappa = 1, gamma = 2s/3
Setup& shared_setup() {
  static Setup* s = [] {
    const double order = 0.75;
    const auto params = FracParams::make(1, order);
    const auto grid = RadialGrid::interval(128, 2.0 / order);
    auto green = GreenOperator(assemble(grid, params, 2));
    auto a = MembraneProfile::semisphere(grid, 1.0, 0.5);
    BisectOptions opt;
    opt.rel_tol = 1e-3;
    auto pr = bisect_pullin(green, a, opt);
    return new Setup{std::move(green), std::move(a), pr};
  }();
  return *s;
}

}  // namespace

TEST_CASE("zero load gives the zero solution") {
  auto& st = shared_setup();
  const auto t = iterate(st.green, st.a, 0.0);
  CHECK(t.status == SolveStatus::Converged);
  CHECK(t.final.sup_norm() == 0.0);
}

TEST_CASE("small-load linearization: u ~ lambda G[a^-2] to first order") {
  auto& st = shared_setup();
  const auto& g = *st.green.grid();
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    f[i] = 1.0 / std::pow(st.a.values.values[i], 2);
  const auto base = st.green.apply(f);

  double dev[2];
  int k = 0;
  for (double lambda : {2e-4, 4e-4}) {
    const auto t = iterate(st.green, st.a, lambda);
    REQUIRE(t.status == SolveStatus::Converged);
    double sup_dev = 0.0, sup_u = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      sup_dev = std::max(sup_dev,
                         std::fabs(t.final.values[i] - lambda * base[i]));
      sup_u = std::max(sup_u, t.final.values[i]);
    }
    dev[k++] = sup_dev / sup_u;
  }
  CHECK(dev[0] < 0.01);
  // deviation is O(lambda): doubling lambda roughly doubles it
  CHECK(dev[1] / dev[0] == doctest::Approx(2.0).epsilon(0.35));
}

TEST_CASE("oversized load touches down") {
  auto& st = shared_setup();
  const double bound = upper_bound_general(st.green, st.a);
  const auto t = iterate(st.green, st.a, 10.0 * bound);
  CHECK(t.status == SolveStatus::Touchdown);
}

TEST_CASE("converged traces meet their contracts") {
  auto& st = shared_setup();
  const double lambda = 0.5 * st.pullin.lambda_lo;
  const auto t = iterate(st.green, st.a, lambda);
  REQUIRE(t.status == SolveStatus::Converged);
  const double amax = st.a.max_value();
  CHECK(t.residual <= 1e-8 * amax);
  CHECK(t.min_gap > 0.0);
  // 0 < u < a strictly at interior nodes
  for (std::size_t i = 0; i < t.final.size(); ++i) {
    CHECK(t.final.values[i] > 0.0);
    CHECK(t.final.values[i] < st.a.values.values[i]);
  }
  // recorded steps shrink geometrically in the tail
  const auto& d = t.sup_diffs;
  REQUIRE(d.size() >= 5);
  CHECK(d.back() < d.front());
}

TEST_CASE("lambda monotonicity with the linear gap bound") {
  auto& st = shared_setup();
  const double lam = st.pullin.lambda_lo;
  const auto t1 = iterate(st.green, st.a, 0.5 * lam);
  const auto t2 = iterate(st.green, st.a, 0.9 * lam);
  REQUIRE(t1.status == SolveStatus::Converged);
  REQUIRE(t2.status == SolveStatus::Converged);

  // identical loads: equality within slack
  CHECK(monotone_gap_check(st.green, st.a, t1, t1).ok);
  // strict gap at interior nodes
  CHECK(monotone_gap_check(st.green, st.a, t1, t2).ok);
  for (std::size_t i = 0; i < t1.final.size(); ++i)
    CHECK(t2.final.values[i] > t1.final.values[i]);

  // tiny pair: gap matches the first-order expansion within 5%
  const auto s1 = iterate(st.green, st.a, 1e-4);
  const auto s2 = iterate(st.green, st.a, 2e-4);
  std::vector<double> f(st.green.grid()->size());
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = 1.0 / std::pow(st.a.values.values[i], 2);
  const auto base = st.green.apply(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double gap = s2.final.values[i] - s1.final.values[i];
    const double lin = 1e-4 * base[i];
    CHECK(gap == doctest::Approx(lin).epsilon(0.05));
  }
}

TEST_CASE("energy identity and quadratic load bound") {
  auto& st = shared_setup();
  const double lam_star = st.pullin.lambda_lo;

  const auto t0 = iterate(st.green, st.a, 0.0);
  const auto e0 = energy(st.green.op(), t0.final, 0.0, st.a);
  CHECK(e0.dirichlet == 0.0);
  CHECK(e0.reaction == 0.0);

  double ratio_max = 0.0;
  for (double frac : {0.1, 0.25, 0.4, 0.55, 0.7}) {
    const double lambda = frac * lam_star;
    const auto t = iterate(st.green, st.a, lambda);
    REQUIRE(t.status == SolveStatus::Converged);
    const auto e = energy(st.green.op(), t.final, lambda, st.a);
    CHECK(e.dirichlet ==
          doctest::Approx(lambda * e.reaction).epsilon(0.01));
    ratio_max = std::max(ratio_max, e.dirichlet / (lambda * lambda));
  }
  // dirichlet/lambda^2 bounded along the sweep by a single constant
  CHECK(ratio_max < 1e3);
}

TEST_CASE("supersolutions bound the minimal solution") {
  auto& st = shared_setup();
  const auto& g = *st.green.grid();
  const double cs_bound = lower_bound_ball(st.green, 1.0);

  GridFunction w(st.green.grid());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double q = 1.0 - g.nodes[i] * g.nodes[i];
    w.values[i] = (1.0 / 3.0) * std::pow(q, 0.5);  // t=1/3 cap profile
  }
  const double lambda = 0.5 * cs_bound;
  CHECK(supersolution_check(st.green.op(), w, lambda, st.a).ok);

  const auto t = iterate(st.green, st.a, lambda);
  REQUIRE(t.status == SolveStatus::Converged);
  const double slack = 10.0 * 1e-8 * st.a.max_value();
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(t.final.values[i] <= w.values[i] + slack);

  // the solution itself is a supersolution with near-zero margin
  const auto self = supersolution_check(st.green.op(), t.final, lambda, st.a);
  CHECK(self.ok);

  // far above the pull-in bound the cap profile stops being one
  const double big = 10.0 * upper_bound_general(st.green, st.a);
  CHECK_FALSE(supersolution_check(st.green.op(), w, big, st.a).ok);
}

TEST_CASE("solution sup-norm is stable under grid refinement") {
  const double order = 0.75;
  const auto params = FracParams::make(1, order);
  const double lambda = 0.5 * shared_setup().pullin.lambda_lo;
  double sup[2];
  int k = 0;
  for (int n : {128, 257}) {
    const auto grid = RadialGrid::interval(n, 2.0 / order);
    GreenOperator green(assemble(grid, params, 2));
    const auto a = MembraneProfile::semisphere(grid, 1.0, 0.5);
    const auto t = iterate(green, a, lambda);
    REQUIRE(t.status == SolveStatus::Converged);
    sup[k++] = t.final.sup_norm();
  }
  CHECK(std::fabs(sup[1] - sup[0]) <= 0.05 * sup[1]);
}

TEST_CASE("profile bound validation") {
  const auto grid = RadialGrid::interval(96, 3.0);
  GridFunction bad(grid);
  for (std::size_t i = 0; i < grid->size(); ++i)
    bad.values[i] = 0.5 * std::pow(grid->rho(i), 0.4);
  // kappa above the actual floor constant: lower bound must fail
  CHECK_THROWS_AS(MembraneProfile::tabulated(bad, 1.0, 0.4), DomainError);
  CHECK_THROWS_AS(MembraneProfile::semisphere(grid, -1.0, 0.4), DomainError);
  CHECK_THROWS_AS(MembraneProfile::semisphere(grid, 1.0, 1.4), DomainError);
}
