#pragma once

#include <cstdint>
#include <random>

#include "hmpp/geometry.hpp"

namespace hmpp {

// Seeded draw of points and tangents on any chart. All randomized checks and
// CLI commands take their draws from one of these so runs are reproducible.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  // A reference point of the chart: origin, hyperboloid apex, identity matrix.
  static Point origin(const Chart& chart);

  // Gaussian tangent at p rescaled to a uniform norm in (0, max_norm].
  Tangent random_tangent(const Point& p, double max_norm);

  // exp from the chart origin of a random tangent of norm <= spread.
  Point random_point(const Chart& chart, double spread);

  // exp from center of a random tangent of norm <= radius.
  Point random_point_in_ball(const Point& center, double radius);

  double uniform(double lo, double hi);

  std::mt19937_64& rng() { return rng_; }

 private:
  Eigen::VectorXd gaussian(int n);

  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace hmpp
