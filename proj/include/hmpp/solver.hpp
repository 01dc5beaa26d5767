#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hmpp/fields.hpp"

namespace hmpp {

// Outer-loop parameter schedule: lambda_k in [lambda_lo, lambda_hi] and a
// summable eps_k whose running sum must stay within eps_budget.
struct Schedule {
  double lambda_lo = 1.0;
  double lambda_hi = 1.0;
  std::function<double(int)> lambda_of;
  std::function<double(int)> eps_of;
  double eps_budget = 2e-2;

  void validate() const;

  static Schedule constant_exact(double lambda = 1.0);
  // eps_k = eps0 * 2^-k with budget 2 * eps0.
  static Schedule geometric_eps(double lambda = 1.0, double eps0 = 1e-2);
  static Schedule constant_eps(double lambda, double eps0, double budget);
};

enum class CertificateKind { Exact, ResidualBall, ValueGap, WitnessEvidence };
std::string to_string(CertificateKind kind);

// Per-step inexactness record. `detail` is kind-specific: the solution
// distance bound R for ResidualBall, the field's strong-monotonicity modulus
// for ValueGap, 0 otherwise.
struct Certificate {
  CertificateKind kind = CertificateKind::Exact;
  double eps_claimed = 0.0;
  double residual_norm = 0.0;
  double detail = 0.0;
};

struct IterateRecord {
  int k = 0;
  Point p;
  double lambda = 0.0;
  double eps = 0.0;
  Certificate cert;
  int inner_iters = 0;
  std::optional<double> dist_to_ref;
  std::optional<double> slack_main;
  std::optional<double> slack_fejer;
};

struct ProxTrace {
  std::vector<IterateRecord> iterates;
  double budget_used = 0.0;
};

struct ProblemInstance {
  Chart chart;
  VectorFieldOracle field;
  ConvexSetOracle set;
  std::optional<ConvexFunctionOracle> objective;
  std::optional<Point> reference_solution;
  Point start;
  double lipschitz = 1.0;  // inner-step estimate for the field
};

enum class StepPolicy { Exact, ResidualBall, ValueGap };
std::string to_string(StepPolicy policy);

struct StopRule {
  int max_outer = 500;
  int max_inner = 10000;
  double dist_tol = 1e-9;
  double residual_tol = 1e-8;
};

struct SubproblemResult {
  Point p;
  Tangent field_rep;   // selected v in X(p)
  Tangent residual;    // v + w - 2 lambda log_p(anchor), w in N_Omega(p)
  double residual_norm = 0.0;
  int iters = 0;
};

// Remove the best normal-cone element from r: returns the minimum-norm
// r + w over w in the cone spanned by the active outward rays at p.
Tangent residual_against_normal_cone(const ConvexSetOracle& omega, const Point& p,
                                     const Tangent& r);

// Projected geodesic fixed-point iteration for the regularized inclusion
// 0 in X(p) - 2 lambda log_p(anchor) + N_Omega(p), step 1/(2 lambda + L)
// with L halved on oscillation (at most 50 halvings).
SubproblemResult solve_subproblem(const VectorFieldOracle& X, const ConvexSetOracle& omega,
                                  const Point& anchor, double lambda, double inner_tol,
                                  int max_inner, double lipschitz = 1.0);

// Residual-to-epsilon accounting: eps for which the outer convergence
// inequality is guaranteed while iterates stay within distance R of the
// solution set.
double residual_to_eps(double e_norm, double lambda, double R);
// Variant when the error is absorbed by a rho-strongly monotone field.
double residual_to_eps_strong(double e_norm, double rho);

// Default R: 2 dist(p0, project(p0)) + 10, overridable per run.
double default_radius_bound(const ProblemInstance& problem);

struct BudgetTracker {
  double requested = 0.0;
  double certified = 0.0;
};

struct StepResult {
  Point p;
  Certificate cert;
  int inner_iters = 0;
};

StepResult inexact_prox_step(const ProblemInstance& problem, const Point& anchor, int k,
                             const Schedule& schedule, StepPolicy policy, double R,
                             const StopRule& stop, BudgetTracker& budget);

ProxTrace run_ippa(const ProblemInstance& problem, const Schedule& schedule,
                   const StopRule& stop, StepPolicy policy = StepPolicy::Exact,
                   std::optional<double> radius_bound = std::nullopt);

// Per-step slacks of the convergence inequalities against a known solution:
// slack_main(k) = d^2(q,p^k) - d^2(p^k,p^{k+1}) - d^2(q,p^{k+1}) + eps_k/(2 lambda_k)
// slack_fejer(k) = d^2(q,p^k) + eps_k/lambda_lo - d^2(q,p^{k+1})
std::vector<std::pair<double, double>> fejer_monitor(const ProxTrace& trace, const Point& q_ref,
                                                     const Schedule& schedule);

// Distance to stationarity of the inclusion 0 in X(p) + N_Omega(p) at p.
double solution_residual(const ProblemInstance& problem, const Point& p);

// d^2(q, p^{k+1}) <= d^2(q, p^k) + eps'_k for every q in W, plus trace
// boundedness below radius_bound.
bool quasi_fejer_check(const ProxTrace& trace, const std::vector<Point>& W,
                       const std::vector<double>& eps_prime, double radius_bound);

}  // namespace hmpp
