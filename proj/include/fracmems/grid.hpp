#pragma once

// Boundary-graded 1D meshes for the interval (-1,1) and for radial profiles
// on the unit ball, plus sampled scalar fields on them.

#include <cstdint>
#include <memory>
#include <vector>

#include "fracmems/errors.hpp"

namespace fracmems {

enum class Geometry { Interval, BallRadial };

// Nodes are strictly interior; spacing follows dist^(1 - s/2) style grading
// via the map dist ~ xi^grading_exponent. Cell weights are midpoint-cell
// measures and sum exactly to the domain measure.
class RadialGrid {
 public:
  Geometry geometry;
  int dim;  // 1 for Interval, 2 or 3 for BallRadial
  double grading_exponent;
  std::vector<double> nodes;         // positions (interval) or radii (ball)
  std::vector<double> cell_weights;  // per-node cell measure

  static std::shared_ptr<const RadialGrid> interval(int n, double grading);
  static std::shared_ptr<const RadialGrid> ball(int n, int dim,
                                                double grading);

  std::size_t size() const { return nodes.size(); }

  // min{1/2, dist(x_i, boundary)}
  double rho(std::size_t i) const;
  double boundary_distance(std::size_t i) const;
  double min_boundary_distance() const;

  // Domain measure: 2 for the interval, |B_1| for the ball.
  double measure() const;

  std::uint64_t hash() const;

 private:
  void validate() const;
};

// Scalar field sampled at the grid nodes.
struct GridFunction {
  std::shared_ptr<const RadialGrid> grid;
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(std::shared_ptr<const RadialGrid> g)
      : grid(std::move(g)), values(grid->size(), 0.0) {}
  GridFunction(std::shared_ptr<const RadialGrid> g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double sup_norm() const;
  void check_finite(const char* what) const;
};

}  // namespace fracmems
