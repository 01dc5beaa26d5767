#include "hmpp/sampling.hpp"

namespace hmpp {

Point Sampler::origin(const Chart& chart) {
  switch (chart.kind) {
    case ChartKind::Euclidean:
      return Point{chart, Eigen::VectorXd::Zero(chart.n)};
    case ChartKind::Hyperboloid: {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(chart.n + 1);
      c(0) = 1.0;
      return Point{chart, c};
    }
    case ChartKind::Spd:
      return Point{chart, from_matrix(Eigen::MatrixXd::Identity(chart.n, chart.n))};
  }
  throw InvariantViolation("unreachable chart kind");
}

Eigen::VectorXd Sampler::gaussian(int n) {
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) g(i) = normal_(rng_);
  return g;
}

double Sampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

Tangent Sampler::random_tangent(const Point& p, double max_norm) {
  const Chart& chart = p.chart;
  Eigen::VectorXd raw;
  switch (chart.kind) {
    case ChartKind::Euclidean:
      raw = gaussian(chart.n);
      break;
    case ChartKind::Hyperboloid: {
      // Project an ambient gaussian onto T_pM with the Minkowski form.
      Eigen::VectorXd g = gaussian(chart.n + 1);
      double mpg = -p.coords(0) * g(0) + p.coords.tail(chart.n).dot(g.tail(chart.n));
      raw = g + mpg * p.coords;
      break;
    }
    case ChartKind::Spd: {
      Eigen::MatrixXd g = Eigen::Map<Eigen::MatrixXd>(gaussian(chart.n * chart.n).data(),
                                                      chart.n, chart.n);
      raw = from_matrix(0.5 * (g + g.transpose()));
      break;
    }
    default:
      throw InvariantViolation("unreachable chart kind");
  }
  Tangent t{p, raw};
  const double n0 = norm(t);
  if (n0 < tol::tiny_vector) return zero_tangent(p);
  return scale(uniform(0.0, max_norm) / n0, t);
}

Point Sampler::random_point(const Chart& chart, double spread) {
  Point o = origin(chart);
  return exp_map(o, random_tangent(o, spread));
}

Point Sampler::random_point_in_ball(const Point& center, double radius) {
  return exp_map(center, random_tangent(center, radius));
}

}  // namespace hmpp
