#include "hmpp/problems.hpp"

#include <cmath>
#include <limits>

namespace hmpp {

namespace {

void check_oracle(const BenchmarkSpec& spec) {
  if (!spec.instance.set.contains(spec.oracle_solution)) {
    throw InvariantViolation("benchmark '" + spec.name + "': oracle solution infeasible");
  }
  const double r = solution_residual(spec.instance, spec.oracle_solution);
  if (r > tol::stationarity) {
    throw InvariantViolation("benchmark '" + spec.name + "': oracle residual " +
                             std::to_string(r) + " above 1e-6");
  }
}

Point frechet_fixed_point(const std::vector<Point>& anchors, const std::vector<double>& weights,
                          const ConvexSetOracle& omega) {
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  Point p = omega.project(anchors.front());
  for (int it = 0; it < 100000; ++it) {
    Tangent step = zero_tangent(p);
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      step = add(step, scale(weights[i] / wsum, log_map(p, anchors[i])));
    }
    Point next = omega.project(exp_map(p, step));
    const double moved = dist(p, next);
    p = next;
    if (moved < 1e-12) break;
  }
  return p;
}

Point grid_refine_min(const ConvexFunctionOracle& f, const Chart& chart,
                      const Eigen::VectorXd& lo0, const Eigen::VectorXd& hi0) {
  if (chart.kind != ChartKind::Euclidean) {
    throw InvariantViolation("grid refinement oracle is Euclidean only");
  }
  const int n = chart.n;
  Eigen::VectorXd center = 0.5 * (lo0 + hi0);
  Eigen::VectorXd half = 0.5 * (hi0 - lo0);
  const int res = 8;  // (2*res+1)^n evaluations per round
  for (int round = 0; round < 60; ++round) {
    Eigen::VectorXd best = center;
    double best_val = std::numeric_limits<double>::infinity();
    std::vector<int> idx(n, -res);
    bool done = false;
    while (!done) {
      Eigen::VectorXd x = center;
      for (int i = 0; i < n; ++i) x(i) += half(i) * idx[i] / res;
      const double v = f.value(Point{chart, x});
      if (v < best_val) {
        best_val = v;
        best = x;
      }
      int i = 0;
      for (; i < n; ++i) {
        if (++idx[i] <= res) break;
        idx[i] = -res;
      }
      done = (i == n);
    }
    center = best;
    half *= 0.6;
    if (half.maxCoeff() < 1e-9) break;
  }
  return Point{chart, center};
}

}  // namespace

std::string to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::ClosedForm:
      return "closed_form";
    case OracleKind::BruteForceGrid:
      return "brute_force_grid";
    case OracleKind::IndependentFixedPoint:
      return "independent_fixed_point";
  }
  return "?";
}

BenchmarkSpec make_projection_problem(const std::string& name, const Point& q_bar,
                                      const Point& center, double r) {
  if (r <= 0.0) throw InvariantViolation("make_projection_problem: radius must be positive");
  BenchmarkSpec spec;
  spec.name = name;
  spec.instance.chart = q_bar.chart;
  spec.instance.field = grad_dist_sq_field(q_bar);
  spec.instance.set = ball_set(center, r);
  spec.instance.objective = dist_sq_function(q_bar);
  const double d = dist(center, q_bar);
  spec.oracle_solution = geodesic_point(center, q_bar, std::min(1.0, r / d));
  spec.oracle_kind = OracleKind::ClosedForm;
  spec.instance.reference_solution = spec.oracle_solution;
  spec.instance.start = center;
  spec.instance.lipschitz = 6.0;
  check_oracle(spec);
  return spec;
}

BenchmarkSpec make_frechet_mean(const std::string& name, const std::vector<Point>& anchors,
                                const std::vector<double>& weights,
                                const ConvexSetOracle& omega) {
  if (anchors.empty()) throw InvariantViolation("make_frechet_mean: no anchors");
  if (weights.size() != anchors.size()) {
    throw InvariantViolation("make_frechet_mean: weight/anchor count mismatch");
  }
  BenchmarkSpec spec;
  spec.name = name;
  spec.instance.chart = anchors.front().chart;
  spec.instance.field = weighted_grad_dist_sq_field(anchors, weights);
  spec.instance.set = omega;
  spec.instance.objective = weighted_dist_sq_function(anchors, weights);
  spec.oracle_solution = frechet_fixed_point(anchors, weights, omega);
  spec.oracle_kind = OracleKind::IndependentFixedPoint;
  spec.instance.reference_solution = spec.oracle_solution;
  spec.instance.start = omega.project(anchors.front());
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  spec.instance.lipschitz = 4.0 * wsum;
  check_oracle(spec);
  return spec;
}

BenchmarkSpec make_fermat_weber(const std::string& name, const std::vector<Point>& anchors,
                                const ConvexSetOracle& omega) {
  if (anchors.empty()) throw InvariantViolation("make_fermat_weber: no anchors");
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    for (std::size_t j = i + 1; j < anchors.size(); ++j) {
      if (dist(anchors[i], anchors[j]) < tol::boundary) {
        throw InvariantViolation("make_fermat_weber: anchors must be distinct");
      }
    }
  }
  BenchmarkSpec spec;
  spec.name = name;
  spec.instance.chart = anchors.front().chart;
  spec.instance.field = sum_dist_subdiff_field(anchors);
  spec.instance.set = omega;
  spec.instance.objective = sum_dist_function(anchors);
  if (anchors.size() == 1) {
    spec.oracle_solution = anchors.front();
    spec.oracle_kind = OracleKind::ClosedForm;
  } else if (anchors.size() == 2) {
    // Any point of the connecting geodesic minimizes; the fixture pins the
    // midpoint and acceptance stays residual-based.
    spec.oracle_solution = geodesic_point(anchors[0], anchors[1], 0.5);
    spec.oracle_kind = OracleKind::ClosedForm;
  } else {
    Eigen::VectorXd lo = anchors.front().coords, hi = anchors.front().coords;
    for (const Point& a : anchors) {
      lo = lo.cwiseMin(a.coords);
      hi = hi.cwiseMax(a.coords);
    }
    spec.oracle_solution = omega.project(
        grid_refine_min(*spec.instance.objective, spec.instance.chart, lo, hi));
    spec.oracle_kind = OracleKind::BruteForceGrid;
  }
  spec.oracle_solution = omega.project(spec.oracle_solution);
  spec.instance.reference_solution = spec.oracle_solution;
  // Start away from the anchors; the subgradient is set-valued there.
  Tangent nudge = project_to_tangent(
      spec.oracle_solution,
      Eigen::VectorXd::Constant(spec.instance.chart.ambient_dim(), 0.21));
  spec.instance.start = omega.project(exp_map(spec.oracle_solution, nudge));
  spec.instance.lipschitz = 4.0;
  check_oracle(spec);
  return spec;
}

BenchmarkSpec make_skew_vip(const std::string& name, const Eigen::MatrixXd& A, double mu,
                            const Point& shift, const ConvexSetOracle& omega) {
  if (mu <= 0.0) throw InvariantViolation("make_skew_vip: mu must be positive");
  BenchmarkSpec spec;
  spec.name = name;
  spec.instance.chart = shift.chart;
  spec.instance.field = skew_plus_mu_field(A, mu, shift);
  spec.instance.set = omega;
  spec.oracle_solution = shift;
  spec.oracle_kind = OracleKind::ClosedForm;
  spec.instance.reference_solution = spec.oracle_solution;
  Eigen::VectorXd s = shift.coords;
  s(0) += 0.4;
  if (shift.chart.n > 1) s(1) += 0.3;
  spec.instance.start = omega.project(Point{shift.chart, s});
  spec.instance.lipschitz = A.norm() + mu;
  check_oracle(spec);
  return spec;
}

std::vector<std::string> benchmark_names() {
  return {"projection_euclidean", "projection_hyperboloid", "projection_spd",
          "frechet_euclidean",    "frechet_hyperboloid",    "frechet_spd",
          "karcher_spd2",         "skew_vip",               "fermat_weber"};
}

BenchmarkSpec load_benchmark(const std::string& name) {
  if (name == "projection_euclidean") {
    Chart c = Chart::euclidean(2);
    return make_projection_problem(name, Point{c, Eigen::Vector2d(3.0, 4.0)},
                                   Point{c, Eigen::Vector2d(0.0, 0.0)}, 1.0);
  }
  if (name == "projection_hyperboloid") {
    Chart c = Chart::hyperboloid(2);
    Point apex{c, Eigen::Vector3d(1.0, 0.0, 0.0)};
    Point q_bar = exp_map(apex, Tangent{apex, Eigen::Vector3d(0.0, 2.0, 0.0)});
    return make_projection_problem(name, q_bar, apex, 1.0);
  }
  if (name == "projection_spd") {
    Chart c = Chart::spd(2);
    Point id{c, from_matrix(Eigen::Matrix2d::Identity())};
    Eigen::Matrix2d q;
    q << std::exp(2.0), 0.0, 0.0, 1.0;
    return make_projection_problem(name, Point{c, from_matrix(q)}, id, 1.0);
  }
  if (name == "frechet_euclidean") {
    Chart c = Chart::euclidean(2);
    std::vector<Point> anchors{Point{c, Eigen::Vector2d(1.0, 0.0)},
                               Point{c, Eigen::Vector2d(0.0, 2.0)},
                               Point{c, Eigen::Vector2d(-1.0, -1.0)}};
    return make_frechet_mean(name, anchors, {0.2, 0.3, 0.5}, whole_manifold(c));
  }
  if (name == "frechet_hyperboloid") {
    Chart c = Chart::hyperboloid(2);
    Point apex{c, Eigen::Vector3d(1.0, 0.0, 0.0)};
    std::vector<Point> anchors{
        exp_map(apex, Tangent{apex, Eigen::Vector3d(0.0, 0.8, 0.0)}),
        exp_map(apex, Tangent{apex, Eigen::Vector3d(0.0, 0.0, 1.1)}),
        exp_map(apex, Tangent{apex, Eigen::Vector3d(0.0, -0.5, -0.7)})};
    return make_frechet_mean(name, anchors, {1.0, 1.0, 1.0}, whole_manifold(c));
  }
  if (name == "frechet_spd") {
    Chart c = Chart::spd(2);
    Eigen::Matrix2d a1 = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d a2;
    a2 << 2.0, 0.3, 0.3, 1.0;
    Eigen::Matrix2d a3;
    a3 << 0.8, -0.2, -0.2, 1.5;
    std::vector<Point> anchors{Point{c, from_matrix(a1)}, Point{c, from_matrix(a2)},
                               Point{c, from_matrix(a3)}};
    return make_frechet_mean(name, anchors, {0.5, 0.25, 0.25}, whole_manifold(c));
  }
  if (name == "karcher_spd2") {
    Chart c = Chart::spd(2);
    Point a{c, from_matrix(Eigen::Matrix2d::Identity())};
    Eigen::Matrix2d bm;
    bm << std::exp(2.0), 0.0, 0.0, 1.0;
    Point b{c, from_matrix(bm)};
    BenchmarkSpec spec = make_frechet_mean(name, {a, b}, {1.0, 1.0}, whole_manifold(c));
    // Commuting two-point mean has the closed form diag(e, 1).
    Eigen::Matrix2d mid;
    mid << std::exp(1.0), 0.0, 0.0, 1.0;
    spec.oracle_solution = Point{c, from_matrix(mid)};
    spec.oracle_kind = OracleKind::ClosedForm;
    spec.instance.reference_solution = spec.oracle_solution;
    check_oracle(spec);
    return spec;
  }
  if (name == "skew_vip") {
    Chart c = Chart::euclidean(2);
    Eigen::Matrix2d A;
    A << 0.0, 1.0, -1.0, 0.0;
    Point origin{c, Eigen::Vector2d(0.0, 0.0)};
    return make_skew_vip(name, A, 0.1, origin, ball_set(origin, 1.0));
  }
  if (name == "fermat_weber") {
    Chart c = Chart::euclidean(2);
    const double h = std::sqrt(3.0) / 2.0;
    std::vector<Point> anchors{Point{c, Eigen::Vector2d(1.0, 0.0)},
                               Point{c, Eigen::Vector2d(-0.5, h)},
                               Point{c, Eigen::Vector2d(-0.5, -h)}};
    return make_fermat_weber(name, anchors, whole_manifold(c));
  }
  throw InvariantViolation("unknown benchmark: " + name);
}

}  // namespace hmpp
