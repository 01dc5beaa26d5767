#pragma once

#include <string>
#include <vector>

#include "hmpp/solver.hpp"

namespace hmpp {

enum class OracleKind { ClosedForm, BruteForceGrid, IndependentFixedPoint };
std::string to_string(OracleKind kind);

// A problem instance bundled with an independently computed solution. The
// oracle's feasibility and stationarity (residual <= 1e-6) are checked at
// construction.
struct BenchmarkSpec {
  std::string name;
  ProblemInstance instance;
  Point oracle_solution;
  OracleKind oracle_kind = OracleKind::ClosedForm;
};

BenchmarkSpec make_projection_problem(const std::string& name, const Point& q_bar,
                                      const Point& center, double r);

// Weighted Frechet mean of the anchors over omega. The oracle is an
// independent fixed-point iteration run to 1e-12 (projected when omega is
// not the whole manifold).
BenchmarkSpec make_frechet_mean(const std::string& name, const std::vector<Point>& anchors,
                                const std::vector<double>& weights,
                                const ConvexSetOracle& omega);

// Minimize sum_i d(., a_i). Nonsmooth; the solution can be non-unique, so
// acceptance on this benchmark is residual-based. Grid-refinement oracle
// (Euclidean charts) except for the 1- and 2-anchor closed forms.
BenchmarkSpec make_fermat_weber(const std::string& name, const std::vector<Point>& anchors,
                                const ConvexSetOracle& omega);

// X(x) = A(x - c) + mu (x - c) with A skew-symmetric; a monotone non-gradient
// field whose unique zero is c. Euclidean chart only.
BenchmarkSpec make_skew_vip(const std::string& name, const Eigen::MatrixXd& A, double mu,
                            const Point& shift, const ConvexSetOracle& omega);

// Named desk-scale benchmarks covering all charts and both solver paths.
std::vector<std::string> benchmark_names();
BenchmarkSpec load_benchmark(const std::string& name);

}  // namespace hmpp
