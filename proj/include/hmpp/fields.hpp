#pragma once

#include <functional>
#include <vector>

#include "hmpp/geometry.hpp"
#include "hmpp/sampling.hpp"

namespace hmpp {

enum class DomainTag { WholeManifold, Restricted };

// A (possibly multivalued) monotone vector field exposed through finite
// representative lists. `modulus` is the claimed strong-monotonicity modulus
// (0 means merely monotone); claims are checked by sampling, never proven.
struct VectorFieldOracle {
  Chart chart;
  double modulus = 0.0;
  DomainTag domain = DomainTag::WholeManifold;
  std::function<std::vector<Tangent>(const Point&)> evaluate;
};

// Closed geodesically convex set with membership, projection and access to
// the normal cone. `normal_rays` returns unit outward normal directions at p
// (empty in the interior). Only set families with closed-form projections are
// supplied: geodesic balls, the whole manifold, and intersections of balls.
struct ConvexSetOracle {
  Chart chart;
  bool is_whole = false;
  std::function<bool(const Point&)> contains;
  std::function<Point(const Point&)> project;
  std::function<Tangent(const Point&, double)> normal_element;
  std::function<std::vector<Tangent>(const Point&)> normal_rays;
  std::function<Point(Sampler&)> sample_member;
};

struct ConvexFunctionOracle {
  std::function<double(const Point&)> value;
  std::function<std::vector<Tangent>(const Point&)> subgradient;
  // Optional; null when the oracle has no closed-form eps-subgradients.
  std::function<std::vector<Tangent>(const Point&, double)> eps_subgradient;
};

// Finite surrogate for the universal quantifier over the graph of X in the
// enlargement definition: pairs (q, v) with v an output of X at q.
struct Witness {
  Point q;
  Tangent v;
};

struct WitnessSet {
  std::vector<Witness> entries;
};

// --- membership evidence -----------------------------------------------------

// <P_{pq} u - v, log_q p> - rho d^2(p, q) for u in X(p), v in X(q).
double monotone_slack(const VectorFieldOracle& X, const Point& p, const Point& q,
                      const Tangent& u, const Tangent& v);

// min over witnesses of <P_{pq} u - v, log_q p> + eps. Nonnegative slack on
// every witness set is necessary evidence for u in X^eps(p); a negative slack
// refutes membership.
double enlargement_slack(const VectorFieldOracle& X, double eps, const Point& p,
                         const Tangent& u, const WitnessSet& W);

// min over q in W of f(q) - f(p) - <u, log_p q> + eps (eps-subgradient
// inequality evidence).
double eps_subdiff_slack(const ConvexFunctionOracle& f, const Point& p, const Tangent& u,
                         double eps, const std::vector<Point>& W);

// Default witness draw: `count` points from the geodesic ball of radius
// `radius` around p, each paired with the field's first representative.
WitnessSet make_witness_set(const VectorFieldOracle& X, const Point& p, Sampler& sampler,
                            int count = 256, double radius = 4.0);

struct LineSearchResult {
  double slack;
  double t;
  Point q;
};

// Directional refutation search for u against X^eps(p): witnesses q = exp_p(t w)
// with t on a 32-point log grid over [1e-3, 10], then a golden-section pass
// around the coarse minimizer.
LineSearchResult enlargement_line_search(const VectorFieldOracle& X, double eps, const Point& p,
                                         const Tangent& u, const Tangent& w);

// Same search against the eps-subgradient inequality of f.
LineSearchResult eps_subdiff_line_search(const ConvexFunctionOracle& f, double eps,
                                         const Point& p, const Tangent& u, const Tangent& w);

// --- certified members -------------------------------------------------------

// grad d^2_center(p) + 2 sqrt(2 eps) dir/|dir|; member of (grad d^2_center)^eps(p).
Tangent enlarged_ball_element(const Point& center, const Point& p, double eps,
                              const Tangent& dir);

// grad d^2_center(p) + 2 sqrt(eps) dir/|dir|; member of the eps-subdifferential
// of d^2_center at p.
Tangent eps_subgrad_ball_element(const Point& center, const Point& p, double eps,
                                 const Tangent& dir);

// --- field algebra -----------------------------------------------------------

VectorFieldOracle field_sum(const VectorFieldOracle& X1, const VectorFieldOracle& X2);
VectorFieldOracle field_scale(double alpha, const VectorFieldOracle& X);

// X restricted to Omega: representatives of X plus sampled normal elements.
// Evaluation outside Omega is rejected.
VectorFieldOracle field_restriction_sum(const VectorFieldOracle& X, const ConvexSetOracle& omega);

// --- stock oracles -----------------------------------------------------------

VectorFieldOracle zero_field(const Chart& chart);
VectorFieldOracle identity_field(const Chart& chart);  // Euclidean only
VectorFieldOracle grad_dist_sq_field(const Point& center);
// x -> A(x - c) + mu (x - c) with A skew-symmetric; Euclidean only.
VectorFieldOracle skew_plus_mu_field(const Eigen::MatrixXd& A, double mu, const Point& shift);
// Subdifferential of sum_i w_i d^2(., a_i).
VectorFieldOracle weighted_grad_dist_sq_field(const std::vector<Point>& anchors,
                                              const std::vector<double>& weights);
// Subdifferential of sum_i d(., a_i); single representative, zero term at anchors.
VectorFieldOracle sum_dist_subdiff_field(const std::vector<Point>& anchors);

ConvexSetOracle whole_manifold(const Chart& chart);
ConvexSetOracle ball_set(const Point& center, double r);
ConvexSetOracle ball_intersection(const std::vector<std::pair<Point, double>>& balls);

ConvexFunctionOracle dist_sq_function(const Point& center);
ConvexFunctionOracle weighted_dist_sq_function(const std::vector<Point>& anchors,
                                               const std::vector<double>& weights);
ConvexFunctionOracle sum_dist_function(const std::vector<Point>& anchors);

}  // namespace hmpp
