#include "hmpp/fields.hpp"

#include <cmath>
#include <limits>

namespace hmpp {

namespace {

void require_same_chart(const Chart& a, const Chart& b, const char* where) {
  if (!(a == b)) {
    throw ChartMismatch(std::string(where) + ": mixed charts " + to_string(a) + " vs " +
                        to_string(b));
  }
}

double pair_slack(const Point& p, const Tangent& u, const Witness& w) {
  Tangent pu = transport(p, w.q, u);
  Tangent diff = add(pu, scale(-1.0, w.v));
  return inner(w.q, diff, log_map(w.q, p));
}

Tangent unit_direction(const Tangent& dir) {
  const double n = norm(dir);
  if (n < tol::tiny_vector) throw InvariantViolation("zero direction");
  return scale(1.0 / n, dir);
}

}  // namespace

double monotone_slack(const VectorFieldOracle& X, const Point& p, const Point& q,
                      const Tangent& u, const Tangent& v) {
  require_same_chart(X.chart, p.chart, "monotone_slack");
  require_same_chart(p.chart, q.chart, "monotone_slack");
  if (!(u.base.chart == p.chart) || !(v.base.chart == q.chart)) {
    throw ChartMismatch("monotone_slack: tangent base mismatch");
  }
  const double d = dist(p, q);
  return pair_slack(p, u, Witness{q, v}) - X.modulus * d * d;
}

double enlargement_slack(const VectorFieldOracle& X, double eps, const Point& p,
                         const Tangent& u, const WitnessSet& W) {
  require_same_chart(X.chart, p.chart, "enlargement_slack");
  if (eps < 0.0) throw InvariantViolation("enlargement_slack: eps < 0");
  if (W.entries.empty()) throw InvariantViolation("enlargement_slack: empty witness set");
  double worst = std::numeric_limits<double>::infinity();
  for (const Witness& w : W.entries) {
    worst = std::min(worst, pair_slack(p, u, w));
  }
  return worst + eps;
}

double eps_subdiff_slack(const ConvexFunctionOracle& f, const Point& p, const Tangent& u,
                         double eps, const std::vector<Point>& W) {
  if (eps < 0.0) throw InvariantViolation("eps_subdiff_slack: eps < 0");
  if (W.empty()) throw InvariantViolation("eps_subdiff_slack: empty witness set");
  const double fp = f.value(p);
  double worst = std::numeric_limits<double>::infinity();
  for (const Point& q : W) {
    worst = std::min(worst, f.value(q) - fp - inner(p, u, log_map(p, q)));
  }
  return worst + eps;
}

WitnessSet make_witness_set(const VectorFieldOracle& X, const Point& p, Sampler& sampler,
                            int count, double radius) {
  WitnessSet W;
  W.entries.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Point q = sampler.random_point_in_ball(p, radius);
    auto reps = X.evaluate(q);
    if (reps.empty()) continue;
    W.entries.push_back(Witness{q, reps.front()});
  }
  if (W.entries.empty()) throw InvariantViolation("witness sampling produced no entries");
  return W;
}

namespace {

template <typename SlackAt>
LineSearchResult directional_search(const Point& p, const Tangent& w, SlackAt slack_at) {
  Tangent dir = unit_direction(w);
  // Coarse pass: 32 log-spaced steps over [1e-3, 10].
  const int coarse = 32;
  const double lo = std::log(1e-3), hi = std::log(10.0);
  double best_t = 1e-3;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < coarse; ++i) {
    const double t = std::exp(lo + (hi - lo) * i / (coarse - 1));
    const double s = slack_at(t);
    if (s < best) {
      best = s;
      best_t = t;
    }
  }
  // Golden-section refinement in log t around the coarse minimizer; the
  // equality-case violations sit in a narrow window of t.
  const double step = (hi - lo) / (coarse - 1);
  double a = std::log(best_t) - step, b = std::log(best_t) + step;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = slack_at(std::exp(x1)), f2 = slack_at(std::exp(x2));
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = slack_at(std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = slack_at(std::exp(x2));
    }
  }
  const double tr = std::exp(0.5 * (a + b));
  const double sr = slack_at(tr);
  if (sr < best) {
    best = sr;
    best_t = tr;
  }
  return LineSearchResult{best, best_t, exp_map(p, scale(best_t, dir))};
}

}  // namespace

LineSearchResult enlargement_line_search(const VectorFieldOracle& X, double eps, const Point& p,
                                         const Tangent& u, const Tangent& w) {
  Tangent dir = unit_direction(w);
  auto slack_at = [&](double t) {
    Point q = exp_map(p, scale(t, dir));
    auto reps = X.evaluate(q);
    if (reps.empty()) return std::numeric_limits<double>::infinity();
    return pair_slack(p, u, Witness{q, reps.front()}) + eps;
  };
  return directional_search(p, w, slack_at);
}

LineSearchResult eps_subdiff_line_search(const ConvexFunctionOracle& f, double eps,
                                         const Point& p, const Tangent& u, const Tangent& w) {
  Tangent dir = unit_direction(w);
  const double fp = f.value(p);
  auto slack_at = [&](double t) {
    Point q = exp_map(p, scale(t, dir));
    return f.value(q) - fp - inner(p, u, log_map(p, q)) + eps;
  };
  return directional_search(p, w, slack_at);
}

Tangent enlarged_ball_element(const Point& center, const Point& p, double eps,
                              const Tangent& dir) {
  if (eps < 0.0) throw InvariantViolation("enlarged_ball_element: eps < 0");
  Tangent g = grad_dist_sq(center, p);
  if (eps == 0.0) return g;
  return add(g, scale(2.0 * std::sqrt(2.0 * eps), unit_direction(dir)));
}

Tangent eps_subgrad_ball_element(const Point& center, const Point& p, double eps,
                                 const Tangent& dir) {
  if (eps < 0.0) throw InvariantViolation("eps_subgrad_ball_element: eps < 0");
  Tangent g = grad_dist_sq(center, p);
  if (eps == 0.0) return g;
  return add(g, scale(2.0 * std::sqrt(eps), unit_direction(dir)));
}

VectorFieldOracle field_sum(const VectorFieldOracle& X1, const VectorFieldOracle& X2) {
  require_same_chart(X1.chart, X2.chart, "field_sum");
  VectorFieldOracle out;
  out.chart = X1.chart;
  out.modulus = X1.modulus + X2.modulus;
  out.domain = (X1.domain == DomainTag::Restricted || X2.domain == DomainTag::Restricted)
                   ? DomainTag::Restricted
                   : DomainTag::WholeManifold;
  auto e1 = X1.evaluate;
  auto e2 = X2.evaluate;
  out.evaluate = [e1, e2](const Point& p) {
    std::vector<Tangent> out;
    auto r1 = e1(p);
    auto r2 = e2(p);
    out.reserve(r1.size() * r2.size());
    for (const Tangent& a : r1)
      for (const Tangent& b : r2) out.push_back(add(a, b));
    return out;
  };
  return out;
}

VectorFieldOracle field_scale(double alpha, const VectorFieldOracle& X) {
  if (alpha < 0.0) throw InvariantViolation("field_scale: alpha < 0");
  VectorFieldOracle out = X;
  out.modulus = alpha * X.modulus;
  auto e = X.evaluate;
  out.evaluate = [e, alpha](const Point& p) {
    auto reps = e(p);
    for (Tangent& t : reps) t = scale(alpha, t);
    return reps;
  };
  return out;
}

VectorFieldOracle field_restriction_sum(const VectorFieldOracle& X,
                                        const ConvexSetOracle& omega) {
  require_same_chart(X.chart, omega.chart, "field_restriction_sum");
  VectorFieldOracle out;
  out.chart = X.chart;
  out.modulus = X.modulus;
  out.domain = omega.is_whole ? X.domain : DomainTag::Restricted;
  auto e = X.evaluate;
  auto contains = omega.contains;
  auto rays = omega.normal_rays;
  out.evaluate = [e, contains, rays](const Point& p) {
    if (!contains(p)) throw InvariantViolation("field_restriction_sum: point outside the set");
    std::vector<Tangent> normals{zero_tangent(p)};
    for (const Tangent& n : rays(p)) {
      for (double s : {0.5, 1.0, 2.0}) normals.push_back(scale(s, n));
    }
    std::vector<Tangent> reps;
    for (const Tangent& v : e(p))
      for (const Tangent& w : normals) reps.push_back(add(v, w));
    return reps;
  };
  return out;
}

VectorFieldOracle zero_field(const Chart& chart) {
  return VectorFieldOracle{chart, 0.0, DomainTag::WholeManifold,
                           [](const Point& p) { return std::vector<Tangent>{zero_tangent(p)}; }};
}

VectorFieldOracle identity_field(const Chart& chart) {
  if (chart.kind != ChartKind::Euclidean) {
    throw InvariantViolation("identity_field is Euclidean only");
  }
  return VectorFieldOracle{chart, 1.0, DomainTag::WholeManifold, [](const Point& p) {
                             return std::vector<Tangent>{Tangent{p, p.coords}};
                           }};
}

VectorFieldOracle grad_dist_sq_field(const Point& center) {
  // d^2_center is 2-strongly convex on a Hadamard manifold.
  return VectorFieldOracle{center.chart, 2.0, DomainTag::WholeManifold,
                           [center](const Point& p) {
                             return std::vector<Tangent>{grad_dist_sq(center, p)};
                           }};
}

VectorFieldOracle skew_plus_mu_field(const Eigen::MatrixXd& A, double mu, const Point& shift) {
  if (shift.chart.kind != ChartKind::Euclidean) {
    throw InvariantViolation("skew_plus_mu_field is Euclidean only");
  }
  if ((A + A.transpose()).cwiseAbs().maxCoeff() > tol::structural) {
    throw InvariantViolation("skew_plus_mu_field: A is not skew-symmetric");
  }
  if (mu < 0.0) throw InvariantViolation("skew_plus_mu_field: mu < 0");
  return VectorFieldOracle{shift.chart, mu, DomainTag::WholeManifold,
                           [A, mu, shift](const Point& p) {
                             Eigen::VectorXd x = p.coords - shift.coords;
                             return std::vector<Tangent>{Tangent{p, A * x + mu * x}};
                           }};
}

VectorFieldOracle weighted_grad_dist_sq_field(const std::vector<Point>& anchors,
                                              const std::vector<double>& weights) {
  if (anchors.empty()) throw InvariantViolation("no anchors");
  if (anchors.size() != weights.size()) throw InvariantViolation("anchor/weight size mismatch");
  double wsum = 0.0;
  for (double w : weights) {
    if (w <= 0.0) throw InvariantViolation("nonpositive weight");
    wsum += w;
  }
  return VectorFieldOracle{anchors.front().chart, 2.0 * wsum, DomainTag::WholeManifold,
                           [anchors, weights](const Point& p) {
                             Tangent g = zero_tangent(p);
                             for (std::size_t i = 0; i < anchors.size(); ++i) {
                               g = add(g, scale(weights[i], grad_dist_sq(anchors[i], p)));
                             }
                             return std::vector<Tangent>{g};
                           }};
}

VectorFieldOracle sum_dist_subdiff_field(const std::vector<Point>& anchors) {
  if (anchors.empty()) throw InvariantViolation("no anchors");
  return VectorFieldOracle{anchors.front().chart, 0.0, DomainTag::WholeManifold,
                           [anchors](const Point& p) {
                             Tangent g = zero_tangent(p);
                             for (const Point& a : anchors) {
                               const double d = dist(p, a);
                               // 0 is a valid subgradient of d(., a) at a itself.
                               if (d > tol::boundary) {
                                 g = add(g, scale(-1.0 / d, log_map(p, a)));
                               }
                             }
                             return std::vector<Tangent>{g};
                           }};
}

ConvexSetOracle whole_manifold(const Chart& chart) {
  ConvexSetOracle s;
  s.chart = chart;
  s.is_whole = true;
  s.contains = [](const Point&) { return true; };
  s.project = [](const Point& p) { return p; };
  s.normal_element = [](const Point& p, double) { return zero_tangent(p); };
  s.normal_rays = [](const Point&) { return std::vector<Tangent>{}; };
  s.sample_member = [chart](Sampler& smp) { return smp.random_point(chart, 3.0); };
  return s;
}

ConvexSetOracle ball_set(const Point& center, double r) {
  if (r <= 0.0) throw InvariantViolation("ball_set: radius must be positive");
  ConvexSetOracle s;
  s.chart = center.chart;
  s.is_whole = false;
  s.contains = [center, r](const Point& p) {
    return dist(center, p) <= r + tol::boundary;
  };
  s.project = [center, r](const Point& p) {
    const double d = dist(center, p);
    if (d <= r) return p;
    return geodesic_point(center, p, r / d);
  };
  s.normal_element = [center, r](const Point& p, double sc) {
    if (sc < 0.0) throw InvariantViolation("normal_element: negative scale");
    const double d = dist(center, p);
    if (std::abs(d - r) > tol::boundary * std::max(1.0, r)) {
      throw InvariantViolation("normal_element: point is not on the boundary");
    }
    return scale(-sc, log_map(p, center));
  };
  s.normal_rays = [center, r](const Point& p) {
    const double d = dist(center, p);
    std::vector<Tangent> rays;
    if (std::abs(d - r) <= tol::boundary * std::max(1.0, r)) {
      rays.push_back(scale(-1.0 / d, log_map(p, center)));
    }
    return rays;
  };
  s.sample_member = [center, r](Sampler& smp) { return smp.random_point_in_ball(center, r); };
  return s;
}

ConvexSetOracle ball_intersection(const std::vector<std::pair<Point, double>>& balls) {
  if (balls.empty() || balls.size() > 4) {
    throw InvariantViolation("ball_intersection supports 1..4 balls");
  }
  std::vector<ConvexSetOracle> parts;
  for (const auto& [c, r] : balls) parts.push_back(ball_set(c, r));
  ConvexSetOracle s;
  s.chart = balls.front().first.chart;
  s.is_whole = false;
  s.contains = [parts](const Point& p) {
    for (const auto& b : parts)
      if (!b.contains(p)) return false;
    return true;
  };
  // Cyclic alternating projections to a 1e-10 fixed point. Yields a member;
  // for overlapping balls with nonempty interior this is the limit used by
  // the inner solver, not necessarily the metric projection.
  s.project = [parts](const Point& p0) {
    Point p = p0;
    for (int it = 0; it < 10000; ++it) {
      Point prev = p;
      for (const auto& b : parts) p = b.project(p);
      if (dist(prev, p) < 1e-10) break;
    }
    return p;
  };
  s.normal_rays = [parts](const Point& p) {
    std::vector<Tangent> rays;
    for (const auto& b : parts) {
      for (const Tangent& n : b.normal_rays(p)) rays.push_back(n);
    }
    return rays;
  };
  s.normal_element = [s](const Point& p, double sc) {
    auto rays = s.normal_rays(p);
    Tangent w = zero_tangent(p);
    for (const Tangent& n : rays) w = add(w, scale(sc, n));
    return w;
  };
  s.sample_member = [s, parts](Sampler& smp) {
    Point p = parts.front().sample_member(smp);
    return s.project(p);
  };
  return s;
}

ConvexFunctionOracle dist_sq_function(const Point& center) {
  ConvexFunctionOracle f;
  f.value = [center](const Point& p) {
    const double d = dist(center, p);
    return d * d;
  };
  f.subgradient = [center](const Point& p) {
    return std::vector<Tangent>{grad_dist_sq(center, p)};
  };
  f.eps_subgradient = [center](const Point& p, double eps) {
    std::vector<Tangent> out{grad_dist_sq(center, p)};
    if (eps > 0.0) {
      // One representative per coordinate direction on the eps-ball boundary.
      for (int i = 0; i < p.chart.ambient_dim(); ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(p.chart.ambient_dim());
        e(i) = 1.0;
        Tangent dir = project_to_tangent(p, e);
        if (norm(dir) < tol::tiny_vector) continue;
        out.push_back(eps_subgrad_ball_element(center, p, eps, dir));
      }
    }
    return out;
  };
  return f;
}

ConvexFunctionOracle weighted_dist_sq_function(const std::vector<Point>& anchors,
                                               const std::vector<double>& weights) {
  if (anchors.empty() || anchors.size() != weights.size()) {
    throw InvariantViolation("weighted_dist_sq_function: bad anchors/weights");
  }
  ConvexFunctionOracle f;
  f.value = [anchors, weights](const Point& p) {
    double v = 0.0;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      const double d = dist(anchors[i], p);
      v += weights[i] * d * d;
    }
    return v;
  };
  auto field = weighted_grad_dist_sq_field(anchors, weights);
  f.subgradient = field.evaluate;
  return f;
}

ConvexFunctionOracle sum_dist_function(const std::vector<Point>& anchors) {
  if (anchors.empty()) throw InvariantViolation("sum_dist_function: no anchors");
  ConvexFunctionOracle f;
  f.value = [anchors](const Point& p) {
    double v = 0.0;
    for (const Point& a : anchors) v += dist(p, a);
    return v;
  };
  auto field = sum_dist_subdiff_field(anchors);
  f.subgradient = field.evaluate;
  return f;
}

}  // namespace hmpp
