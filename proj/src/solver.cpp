#include "hmpp/solver.hpp"

#include <cmath>
#include <limits>

namespace hmpp {

void Schedule::validate() const {
  if (!(0.0 < lambda_lo && lambda_lo <= lambda_hi)) {
    throw InvariantViolation("schedule: need 0 < lambda_lo <= lambda_hi");
  }
  if (eps_budget <= 0.0) throw InvariantViolation("schedule: budget must be positive");
  if (!lambda_of || !eps_of) throw InvariantViolation("schedule: missing rules");
}

Schedule Schedule::constant_exact(double lambda) {
  Schedule s;
  s.lambda_lo = s.lambda_hi = lambda;
  s.lambda_of = [lambda](int) { return lambda; };
  s.eps_of = [](int) { return 0.0; };
  s.eps_budget = 1.0;
  return s;
}

Schedule Schedule::geometric_eps(double lambda, double eps0) {
  Schedule s;
  s.lambda_lo = s.lambda_hi = lambda;
  s.lambda_of = [lambda](int) { return lambda; };
  s.eps_of = [eps0](int k) { return eps0 * std::pow(2.0, -k); };
  s.eps_budget = 2.0 * eps0;
  return s;
}

Schedule Schedule::constant_eps(double lambda, double eps0, double budget) {
  Schedule s;
  s.lambda_lo = s.lambda_hi = lambda;
  s.lambda_of = [lambda](int) { return lambda; };
  s.eps_of = [eps0](int) { return eps0; };
  s.eps_budget = budget;
  return s;
}

std::string to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::Exact:
      return "exact";
    case CertificateKind::ResidualBall:
      return "residual_ball";
    case CertificateKind::ValueGap:
      return "value_gap";
    case CertificateKind::WitnessEvidence:
      return "witness_evidence";
  }
  return "?";
}

std::string to_string(StepPolicy policy) {
  switch (policy) {
    case StepPolicy::Exact:
      return "exact";
    case StepPolicy::ResidualBall:
      return "residual_ball";
    case StepPolicy::ValueGap:
      return "value_gap";
  }
  return "?";
}

Tangent residual_against_normal_cone(const ConvexSetOracle& omega, const Point& p,
                                     const Tangent& r) {
  std::vector<Tangent> rays = omega.is_whole ? std::vector<Tangent>{} : omega.normal_rays(p);
  if (rays.empty()) return r;
  const int m = static_cast<int>(rays.size());
  Eigen::MatrixXd G(m, m);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    b(i) = inner(p, rays[i], r);
    for (int j = i; j < m; ++j) {
      G(i, j) = G(j, i) = inner(p, rays[i], rays[j]);
    }
  }
  // min_{s >= 0} |r + sum_i s_i n_i|: with at most 4 rays, enumerate supports.
  Tangent best = r;
  double best_norm = norm(r);
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    const int k = static_cast<int>(idx.size());
    Eigen::MatrixXd Gs(k, k);
    Eigen::VectorXd bs(k);
    for (int i = 0; i < k; ++i) {
      bs(i) = b(idx[i]);
      for (int j = 0; j < k; ++j) Gs(i, j) = G(idx[i], idx[j]);
    }
    Eigen::VectorXd s = Gs.ldlt().solve(-bs);
    if ((s.array() < -1e-12).any()) continue;
    Tangent cand = r;
    for (int i = 0; i < k; ++i) cand = add(cand, scale(std::max(0.0, s(i)), rays[idx[i]]));
    const double n = norm(cand);
    if (n < best_norm) {
      best_norm = n;
      best = cand;
    }
  }
  return best;
}

SubproblemResult solve_subproblem(const VectorFieldOracle& X, const ConvexSetOracle& omega,
                                  const Point& anchor, double lambda, double inner_tol,
                                  int max_inner, double lipschitz) {
  if (lambda <= 0.0) throw InvariantViolation("solve_subproblem: lambda must be positive");
  if (!omega.contains(anchor)) throw InvariantViolation("solve_subproblem: infeasible anchor");
  double tau = 1.0 / (2.0 * lambda + std::max(lipschitz, 0.0));
  Point p = anchor;
  double prev_rnorm = std::numeric_limits<double>::infinity();
  int halvings = 0;
  SubproblemResult best;
  best.residual_norm = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_inner; ++it) {
    auto reps = X.evaluate(p);
    if (reps.empty()) throw InvariantViolation("solve_subproblem: empty field value");
    Tangent v = reps.front();
    Tangent pull = scale(2.0 * lambda, log_map(p, anchor));
    Tangent raw = add(v, scale(-1.0, pull));  // X(p) - 2 lambda log_p anchor
    Tangent e = residual_against_normal_cone(omega, p, raw);
    const double rnorm = norm(e);
    if (rnorm < best.residual_norm) {
      best = SubproblemResult{p, v, e, rnorm, it};
    }
    if (rnorm <= inner_tol) {
      best.iters = it;
      return best;
    }
    if (rnorm > prev_rnorm) {
      tau *= 0.5;
      if (++halvings > 50) {
        throw InnerSolveFailure("inner solver oscillating after 50 step halvings",
                                best.residual_norm, it);
      }
    }
    prev_rnorm = rnorm;
    p = omega.project(exp_map(p, scale(-tau, raw)));
  }
  throw InnerSolveFailure("inner solver exhausted max_inner without reaching tolerance",
                          best.residual_norm, max_inner);
}

double residual_to_eps(double e_norm, double lambda, double R) {
  if (R <= 0.0) throw InvariantViolation("residual_to_eps: R must be positive");
  if (lambda <= 0.0) throw InvariantViolation("residual_to_eps: lambda must be positive");
  if (e_norm < 0.0) throw InvariantViolation("residual_to_eps: negative residual norm");
  return 2.0 * e_norm * R;
}

double residual_to_eps_strong(double e_norm, double rho) {
  if (rho <= 0.0) throw InvariantViolation("residual_to_eps_strong: rho must be positive");
  // Young's inequality splits <e, log q> as e^2/(4 rho) + rho d^2; the
  // quadratic part is absorbed by rho-strong monotonicity, and the monitor's
  // eps/(2 lambda) convention doubles the remainder.
  return e_norm * e_norm / (2.0 * rho);
}

double default_radius_bound(const ProblemInstance& problem) {
  return 2.0 * dist(problem.start, problem.set.project(problem.start)) + 10.0;
}

StepResult inexact_prox_step(const ProblemInstance& problem, const Point& anchor, int k,
                             const Schedule& schedule, StepPolicy policy, double R,
                             const StopRule& stop, BudgetTracker& budget) {
  const double lambda = schedule.lambda_of(k);
  if (lambda < schedule.lambda_lo - 1e-15 || lambda > schedule.lambda_hi + 1e-15) {
    throw InvariantViolation("lambda_of(k) outside [lambda_lo, lambda_hi]");
  }
  const double requested = (policy == StepPolicy::Exact) ? 0.0 : schedule.eps_of(k);
  if (requested < 0.0) throw InvariantViolation("eps_of(k) < 0");
  if (budget.requested + requested > schedule.eps_budget + 1e-15) {
    throw BudgetExhausted("epsilon schedule exceeds budget", requested, budget.requested,
                          schedule.eps_budget, k);
  }

  double inner_tol = 0.0;
  Certificate cert;
  switch (policy) {
    case StepPolicy::Exact:
      inner_tol = 1e-12;
      cert.kind = CertificateKind::Exact;
      break;
    case StepPolicy::ResidualBall:
      inner_tol = requested / (2.0 * R);
      cert.kind = CertificateKind::ResidualBall;
      cert.detail = R;
      break;
    case StepPolicy::ValueGap: {
      // Absorption happens against the solution, so only the field's own
      // strong-monotonicity modulus is available.
      const double rho = problem.field.modulus;
      if (rho <= 0.0) {
        throw InvariantViolation("value-gap policy requires a strongly monotone field");
      }
      inner_tol = std::sqrt(2.0 * rho * requested);
      cert.kind = CertificateKind::ValueGap;
      cert.detail = rho;
      break;
    }
  }
  // Exact steps still need a nonzero target. Inexact targets are kept as
  // computed: flooring them would let the certificate outrun the schedule.
  if (policy == StepPolicy::Exact) inner_tol = std::max(inner_tol, 1e-12);

  SubproblemResult sub = solve_subproblem(problem.field, problem.set, anchor, lambda, inner_tol,
                                          stop.max_inner, problem.lipschitz);
  cert.residual_norm = sub.residual_norm;
  switch (policy) {
    case StepPolicy::Exact:
      cert.eps_claimed = 0.0;
      break;
    case StepPolicy::ResidualBall:
      cert.eps_claimed = residual_to_eps(sub.residual_norm, lambda, R);
      break;
    case StepPolicy::ValueGap:
      cert.eps_claimed = residual_to_eps_strong(sub.residual_norm, cert.detail);
      break;
  }
  if (cert.eps_claimed > requested + 1e-15 && policy != StepPolicy::Exact) {
    throw InvariantViolation("certified epsilon exceeds the scheduled eps_of(k)");
  }
  if (budget.certified + cert.eps_claimed > schedule.eps_budget + 1e-15) {
    throw BudgetExhausted("certified epsilon sum would exceed budget", cert.eps_claimed,
                          budget.certified, schedule.eps_budget, k);
  }
  budget.requested += requested;
  budget.certified += cert.eps_claimed;
  return StepResult{sub.p, cert, sub.iters};
}

double solution_residual(const ProblemInstance& problem, const Point& p) {
  if (!problem.set.contains(p)) {
    throw InvariantViolation("solution_residual: infeasible point");
  }
  auto reps = problem.field.evaluate(p);
  if (reps.empty()) throw InvariantViolation("solution_residual: empty field value");
  double best = std::numeric_limits<double>::infinity();
  for (const Tangent& v : reps) {
    best = std::min(best, norm(residual_against_normal_cone(problem.set, p, v)));
  }
  return best;
}

ProxTrace run_ippa(const ProblemInstance& problem, const Schedule& schedule,
                   const StopRule& stop, StepPolicy policy,
                   std::optional<double> radius_bound) {
  schedule.validate();
  if (!problem.set.contains(problem.start)) {
    throw InvariantViolation("run_ippa: infeasible start point");
  }
  const double R = radius_bound.value_or(default_radius_bound(problem));
  ProxTrace trace;
  BudgetTracker budget;
  Point p = problem.start;

  auto dist_to_ref = [&](const Point& q) -> std::optional<double> {
    if (!problem.reference_solution) return std::nullopt;
    return dist(*problem.reference_solution, q);
  };

  IterateRecord first;
  first.k = 0;
  first.p = p;
  first.dist_to_ref = dist_to_ref(p);
  trace.iterates.push_back(first);

  for (int k = 0; k < stop.max_outer; ++k) {
    StepResult step = inexact_prox_step(problem, p, k, schedule, policy, R, stop, budget);
    IterateRecord rec;
    rec.k = k + 1;
    rec.p = step.p;
    rec.lambda = schedule.lambda_of(k);
    rec.eps = step.cert.eps_claimed;
    rec.cert = step.cert;
    rec.inner_iters = step.inner_iters;
    rec.dist_to_ref = dist_to_ref(step.p);
    if (problem.reference_solution) {
      const Point& q = *problem.reference_solution;
      const double dqk = dist(q, p), dqk1 = dist(q, step.p), dstep = dist(p, step.p);
      rec.slack_main =
          dqk * dqk - dstep * dstep - dqk1 * dqk1 + rec.eps / (2.0 * rec.lambda);
      rec.slack_fejer = dqk * dqk + rec.eps / schedule.lambda_lo - dqk1 * dqk1;
    }
    trace.iterates.push_back(rec);
    const double step_len = dist(p, step.p);
    p = step.p;
    // A short inexact step only says the sloppy subproblem kept the anchor;
    // treat it as progress evidence only when the step was certified exact.
    if (step_len <= stop.dist_tol && step.cert.eps_claimed == 0.0) break;
    if (solution_residual(problem, p) <= stop.residual_tol) break;
  }
  trace.budget_used = budget.certified;
  return trace;
}

std::vector<std::pair<double, double>> fejer_monitor(const ProxTrace& trace, const Point& q_ref,
                                                     const Schedule& schedule) {
  if (trace.iterates.empty()) throw InvariantViolation("fejer_monitor: empty trace");
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 1; i < trace.iterates.size(); ++i) {
    const IterateRecord& prev = trace.iterates[i - 1];
    const IterateRecord& cur = trace.iterates[i];
    const double dqk = dist(q_ref, prev.p);
    const double dqk1 = dist(q_ref, cur.p);
    const double dstep = dist(prev.p, cur.p);
    const double main =
        dqk * dqk - dstep * dstep - dqk1 * dqk1 + cur.eps / (2.0 * cur.lambda);
    const double fejer = dqk * dqk + cur.eps / schedule.lambda_lo - dqk1 * dqk1;
    out.emplace_back(main, fejer);
  }
  return out;
}

bool quasi_fejer_check(const ProxTrace& trace, const std::vector<Point>& W,
                       const std::vector<double>& eps_prime, double radius_bound) {
  if (trace.iterates.empty()) throw InvariantViolation("quasi_fejer_check: empty trace");
  const Point& p0 = trace.iterates.front().p;
  for (const IterateRecord& rec : trace.iterates) {
    if (!(dist(p0, rec.p) <= radius_bound)) return false;
  }
  for (const Point& q : W) {
    for (std::size_t i = 1; i < trace.iterates.size(); ++i) {
      const double ek = (i - 1 < eps_prime.size()) ? eps_prime[i - 1] : 0.0;
      const double a = dist(q, trace.iterates[i].p);
      const double b = dist(q, trace.iterates[i - 1].p);
      if (a * a > b * b + ek + 1e-9) return false;
    }
  }
  return true;
}

}  // namespace hmpp
