#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hmpp/problems.hpp"
#include "hmpp/solver.hpp"

using namespace hmpp;

namespace {

Point e1(double x) {
  return make_point(Chart::euclidean(1), Eigen::VectorXd::Constant(1, x));
}

Point e2(double x, double y) {
  return make_point(Chart::euclidean(2), Eigen::Vector2d(x, y));
}

ProblemInstance grad_problem(const Point& q_bar, const ConvexSetOracle& omega,
                             const Point& start) {
  ProblemInstance problem{q_bar.chart, grad_dist_sq_field(q_bar), omega,
                          dist_sq_function(q_bar), std::nullopt, start, 6.0};
  return problem;
}

}  // namespace

TEST_CASE("schedule validation") {
  Schedule s = Schedule::geometric_eps();
  s.validate();
  Schedule bad = s;
  bad.lambda_lo = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvariantViolation);
  Schedule bad2 = s;
  bad2.eps_budget = -1.0;
  CHECK_THROWS_AS(bad2.validate(), InvariantViolation);
  // Geometric schedule sums exactly to the budget.
  double sum = 0.0;
  for (int k = 0; k < 60; ++k) sum += s.eps_of(k);
  CHECK(sum <= s.eps_budget + 1e-15);
}

TEST_CASE("subproblem closed forms") {
  // Unconstrained 1-D: X = grad d^2_{q_bar}, anchor a, lambda -> solution on
  // the segment at fraction 1/(1+lambda) toward q_bar.
  Point q_bar = e1(1.0), anchor = e1(0.0);
  ConvexSetOracle omega = whole_manifold(q_bar.chart);
  VectorFieldOracle X = grad_dist_sq_field(q_bar);
  auto res = solve_subproblem(X, omega, anchor, 1.0, 1e-12, 10000, 6.0);
  CHECK(res.p.coords(0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(res.residual_norm <= 1e-10);

  // Large lambda pins the iterate to the anchor.
  auto pinned = solve_subproblem(X, omega, anchor, 1e6, 1e-12, 10000, 6.0);
  CHECK(std::abs(pinned.p.coords(0)) <= 1e-5);

  // Geodesic closed-form cross-check on every chart.
  for (const Chart& chart : {Chart::euclidean(2), Chart::hyperboloid(2), Chart::spd(2)}) {
    Sampler sampler(51);
    Point qb = sampler.random_point(chart, 1.0);
    Point a = sampler.random_point(chart, 1.0);
    for (double lambda : {0.5, 1.0, 4.0}) {
      auto r = solve_subproblem(grad_dist_sq_field(qb), whole_manifold(chart), a, lambda,
                                1e-12, 10000, 6.0);
      Point expected = geodesic_point(a, qb, 1.0 / (1.0 + lambda));
      CHECK(dist(r.p, expected) <= 1e-8);
    }
  }

  // Constrained: projection onto the unit ball with anchor outside pulls the
  // iterate between the projected anchor and q_bar's projection.
  ConvexSetOracle ball = ball_set(e2(0.0, 0.0), 1.0);
  auto cres = solve_subproblem(grad_dist_sq_field(e2(3.0, 4.0)), ball, e2(0.6, 0.8), 1.0,
                               1e-12, 10000, 6.0);
  CHECK(ball.contains(cres.p));
  CHECK(cres.residual_norm <= 1e-9);
  CHECK(cres.p.coords(0) == doctest::Approx(0.6).epsilon(1e-8));
  CHECK(cres.p.coords(1) == doctest::Approx(0.8).epsilon(1e-8));
}

TEST_CASE("residual to eps accounting") {
  CHECK(residual_to_eps(0.0, 1.0, 5.0) == doctest::Approx(0.0));
  CHECK(residual_to_eps(0.4, 1.0, 2.0) == doctest::Approx(1.6));
  CHECK(residual_to_eps_strong(0.0, 2.0) == doctest::Approx(0.0));
  CHECK(residual_to_eps_strong(2.0, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("exact recursion in one dimension") {
  // q_bar = 1, p0 = 0, lambda = 1: p^k = 1 - 2^-k.
  ProblemInstance problem = grad_problem(e1(1.0), whole_manifold(Chart::euclidean(1)), e1(0.0));
  problem.reference_solution = e1(1.0);
  StopRule stop;
  stop.max_outer = 10;
  stop.dist_tol = 0.0;
  stop.residual_tol = 0.0;
  ProxTrace trace = run_ippa(problem, Schedule::constant_exact(1.0), stop);
  REQUIRE(trace.iterates.size() == 11);
  for (int k = 0; k <= 10; ++k) {
    CHECK(trace.iterates[k].p.coords(0) ==
          doctest::Approx(1.0 - std::pow(2.0, -k)).epsilon(1e-9));
  }
  // Distances to the reference are recorded and halve each step.
  CHECK(*trace.iterates[3].dist_to_ref == doctest::Approx(0.125).epsilon(1e-9));
  // Both monitor slacks are nonnegative throughout.
  for (size_t k = 1; k < trace.iterates.size(); ++k) {
    CHECK(*trace.iterates[k].slack_main >= -tol::monitor);
    CHECK(*trace.iterates[k].slack_fejer >= -1e-9);
  }
}

TEST_CASE("fejer monitor detects tampering") {
  ProblemInstance problem = grad_problem(e1(1.0), whole_manifold(Chart::euclidean(1)), e1(0.0));
  StopRule stop;
  stop.max_outer = 6;
  stop.dist_tol = 0.0;
  stop.residual_tol = 0.0;
  Schedule schedule = Schedule::constant_exact(1.0);
  ProxTrace trace = run_ippa(problem, schedule, stop);
  auto slacks = fejer_monitor(trace, e1(1.0), schedule);
  REQUIRE(slacks.size() == trace.iterates.size() - 1);
  for (auto [s_main, s_fejer] : slacks) {
    CHECK(s_main >= -tol::monitor);
    CHECK(s_fejer >= -tol::monitor);
  }
  // Tampered iterate moves away from the solution: slack goes negative.
  ProxTrace bad = trace;
  bad.iterates[3].p = e1(-5.0);
  auto bad_slacks = fejer_monitor(bad, e1(1.0), schedule);
  CHECK(bad_slacks[2].second < 0.0);
}

TEST_CASE("quasi fejer check") {
  ProblemInstance problem = grad_problem(e1(1.0), whole_manifold(Chart::euclidean(1)), e1(0.0));
  StopRule stop;
  stop.max_outer = 8;
  stop.dist_tol = 0.0;
  stop.residual_tol = 0.0;
  ProxTrace trace = run_ippa(problem, Schedule::constant_exact(1.0), stop);
  std::vector<Point> W{e1(1.0), e1(1.5), e1(2.0)};
  std::vector<double> eps_prime(trace.iterates.size(), 1e-9);
  CHECK(quasi_fejer_check(trace, W, eps_prime, 100.0));
  // A divergent sequence fails against distant test points.
  ProxTrace diverge;
  for (int k = 0; k <= 5; ++k) {
    IterateRecord rec;
    rec.k = k;
    rec.p = e1(static_cast<double>(k));
    diverge.iterates.push_back(rec);
  }
  CHECK(!quasi_fejer_check(diverge, {e1(-10.0)}, std::vector<double>(6, 1e-9), 100.0));
  CHECK(!quasi_fejer_check(trace, W, eps_prime, 0.5));
}

TEST_CASE("budget exhaustion is deterministic") {
  ProblemInstance problem = grad_problem(e1(1.0), whole_manifold(Chart::euclidean(1)), e1(0.0));
  StopRule stop;
  stop.max_outer = 20;
  stop.dist_tol = 0.0;
  stop.residual_tol = 0.0;
  Schedule schedule = Schedule::constant_eps(1.0, 0.1, 0.2);
  try {
    run_ippa(problem, schedule, stop, StepPolicy::ResidualBall);
    FAIL("expected BudgetExhausted");
  } catch (const BudgetExhausted& ex) {
    CHECK(ex.iteration == 2);
    CHECK(ex.used + ex.requested > ex.budget);
  }
}

TEST_CASE("inexact policies certify within the requested eps") {
  ProblemInstance problem = grad_problem(e2(1.0, 2.0), whole_manifold(Chart::euclidean(2)),
                                         e2(0.0, 0.0));
  problem.reference_solution = e2(1.0, 2.0);
  StopRule stop;
  Schedule schedule = Schedule::geometric_eps(1.0, 1e-2);
  for (StepPolicy policy : {StepPolicy::ResidualBall, StepPolicy::ValueGap}) {
    CAPTURE(to_string(policy));
    ProxTrace trace = run_ippa(problem, schedule, stop, policy);
    double used = 0.0;
    for (size_t k = 1; k < trace.iterates.size(); ++k) {
      const auto& rec = trace.iterates[k];
      CHECK(rec.cert.eps_claimed <= schedule.eps_of(rec.k - 1) + 1e-15);
      CHECK(*rec.slack_main >= -tol::monitor);
      used += rec.cert.eps_claimed;
    }
    CHECK(used <= schedule.eps_budget + 1e-12);
    CHECK(*trace.iterates.back().dist_to_ref <= 1e-4);
  }
}

TEST_CASE("solution residual") {
  ProblemInstance problem = grad_problem(e2(3.0, 4.0), ball_set(e2(0.0, 0.0), 1.0),
                                         e2(0.0, 0.0));
  // The constrained minimizer (0.6, 0.8) is stationary; the center is not.
  CHECK(solution_residual(problem, e2(0.6, 0.8)) <= 1e-9);
  CHECK(solution_residual(problem, e2(0.0, 0.0)) == doctest::Approx(10.0));
  ProblemInstance free_problem = grad_problem(e2(3.0, 4.0),
                                              whole_manifold(Chart::euclidean(2)),
                                              e2(0.0, 0.0));
  CHECK(solution_residual(free_problem, e2(3.0, 4.0)) == doctest::Approx(0.0));
}

TEST_CASE("default radius bound") {
  ProblemInstance problem = grad_problem(e2(3.0, 4.0), ball_set(e2(0.0, 0.0), 1.0),
                                         e2(3.0, 4.0));
  CHECK(default_radius_bound(problem) == doctest::Approx(2.0 * 4.0 + 10.0));
}
