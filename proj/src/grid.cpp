#include "fracmems/grid.hpp"

#include <algorithm>
#include <cmath>

#include "fracmems/special.hpp"

namespace fracmems {

std::shared_ptr<const RadialGrid> RadialGrid::interval(int n, double grading) {
  if (n < 3) throw DomainError("interval grid needs at least 3 nodes");
  if (grading < 1.0) throw DomainError("grading exponent must be >= 1");
  auto g = std::make_shared<RadialGrid>();
  g->geometry = Geometry::Interval;
  g->dim = 1;
  g->grading_exponent = grading;
  g->nodes.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = -1.0 + 2.0 * (i + 1) / (n + 1);
    const double d = std::pow(1.0 - std::fabs(t), grading);
    g->nodes[i] = (t < 0 ? -1.0 : 1.0) * (1.0 - d);
  }
  g->cell_weights.resize(n);
  double left = -1.0;
  for (int i = 0; i < n; ++i) {
    const double right = (i + 1 < n) ? 0.5 * (g->nodes[i] + g->nodes[i + 1])
                                     : 1.0;
    g->cell_weights[i] = right - left;
    left = right;
  }
  g->validate();
  return g;
}

std::shared_ptr<const RadialGrid> RadialGrid::ball(int n, int dim,
                                                   double grading) {
  if (dim != 2 && dim != 3) throw DomainError("ball grid needs dim 2 or 3");
  if (n < 3) throw DomainError("ball grid needs at least 3 nodes");
  if (grading < 1.0) throw DomainError("grading exponent must be >= 1");
  auto g = std::make_shared<RadialGrid>();
  g->geometry = Geometry::BallRadial;
  g->dim = dim;
  g->grading_exponent = grading;
  g->nodes.resize(n);
  for (int i = 0; i < n; ++i) {
    const double xi = static_cast<double>(i + 1) / (n + 1);
    g->nodes[i] = 1.0 - std::pow(1.0 - xi, grading);
  }
  // Weights are the volumes of the piecewise-linear nodal shape functions
  // (flat cap at the center, drop to zero at r = 1, deficit of the drop
  // assigned to the last node). This makes diag(w) the natural duality
  // weight for the collocation rows, so the symmetrized bilinear form stays
  // consistent near the center, and the sum telescopes to the ball volume
  // exactly.
  const double area = special::sphere_area(dim);
  auto shell = [&](double a, double b) {
    return area / dim * (std::pow(b, dim) - std::pow(a, dim));
  };
  // int_a^b (r - a)/(b - a) dV(r): linear ramp against the volume measure
  auto ramp_up = [&](double a, double b) {
    if (b <= a) return 0.0;
    double m = 0.0;  // int_a^b r^{dim-1} (r - a) dr
    m = (std::pow(b, dim + 1.0) - std::pow(a, dim + 1.0)) / (dim + 1.0) -
        a * (std::pow(b, static_cast<double>(dim)) -
             std::pow(a, static_cast<double>(dim))) /
            dim;
    return area * m / (b - a);
  };
  g->cell_weights.assign(n, 0.0);
  const auto& r = g->nodes;
  // center cap [0, r0] plus the down-ramp toward r1
  g->cell_weights[0] = shell(0.0, r[0]);
  for (int i = 0; i + 1 < n; ++i) {
    const double up = ramp_up(r[i], r[i + 1]);             // toward node i+1
    const double down = shell(r[i], r[i + 1]) - up;        // toward node i
    g->cell_weights[i] += down;
    g->cell_weights[i + 1] += up;
  }
  // boundary segment [r_{n-1}, 1]: ramp plus the Dirichlet-drop deficit
  g->cell_weights[n - 1] += shell(r[n - 1], 1.0);
  g->validate();
  return g;
}

double RadialGrid::boundary_distance(std::size_t i) const {
  return geometry == Geometry::Interval ? 1.0 - std::fabs(nodes[i])
                                        : 1.0 - nodes[i];
}

double RadialGrid::rho(std::size_t i) const {
  return std::min(0.5, boundary_distance(i));
}

double RadialGrid::min_boundary_distance() const {
  double m = boundary_distance(0);
  for (std::size_t i = 1; i < nodes.size(); ++i)
    m = std::min(m, boundary_distance(i));
  return m;
}

double RadialGrid::measure() const {
  return geometry == Geometry::Interval ? 2.0 : special::ball_volume(dim);
}

std::uint64_t RadialGrid::hash() const {
  return special::fnv1a(nodes.data(), nodes.size());
}

void RadialGrid::validate() const {
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if (!(nodes[i] < nodes[i + 1]))
      throw DomainError("grid nodes not strictly increasing");
  if (geometry == Geometry::BallRadial && !(nodes.front() > 0.0))
    throw DomainError("ball grid nodes must have positive radius");
  if (geometry == Geometry::Interval &&
      !(nodes.front() > -1.0 && nodes.back() < 1.0))
    throw DomainError("interval grid nodes must be interior");
  if (min_boundary_distance() > 1e-3)
    throw DomainError("grid does not resolve the boundary to 1e-3");
  double sum = 0.0;
  for (double w : cell_weights) {
    if (!(w > 0.0)) throw DomainError("non-positive cell weight");
    sum += w;
  }
  if (std::fabs(sum - measure()) > 1e-10 * measure())
    throw DomainError("cell weights do not sum to the domain measure");
}

GridFunction::GridFunction(std::shared_ptr<const RadialGrid> g,
                           std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size())
    throw DomainError("grid function length mismatch");
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  return m;
}

void GridFunction::check_finite(const char* what) const {
  for (double v : values)
    if (!std::isfinite(v))
      throw NumericalFault(std::string("non-finite values in ") + what);
}

}  // namespace fracmems
