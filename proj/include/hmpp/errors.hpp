#pragma once

#include <stdexcept>
#include <string>

namespace hmpp {

struct ChartMismatch : std::invalid_argument {
  explicit ChartMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct InvariantViolation : std::invalid_argument {
  explicit InvariantViolation(const std::string& what) : std::invalid_argument(what) {}
};

// Inner subproblem solver ran out of iterations; carries the best residual seen.
struct InnerSolveFailure : std::runtime_error {
  InnerSolveFailure(const std::string& what, double best, int iters)
      : std::runtime_error(what), best_residual(best), iterations(iters) {}
  double best_residual;
  int iterations;
};

// Accepting the step would push the running epsilon sum past the budget.
struct BudgetExhausted : std::runtime_error {
  BudgetExhausted(const std::string& what, double requested, double used, double budget,
                  int iteration)
      : std::runtime_error(what),
        requested(requested),
        used(used),
        budget(budget),
        iteration(iteration) {}
  double requested;
  double used;
  double budget;
  int iteration;
};

}  // namespace hmpp
