#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>

#include "hmpp/config.hpp"
#include "hmpp/errors.hpp"

namespace hmpp {

enum class ChartKind { Euclidean, Hyperboloid, Spd };

// A chart identifies one of the three supported Hadamard manifolds together
// with its dimension parameter (matrix side length for Spd).
struct Chart {
  ChartKind kind;
  int n;

  bool operator==(const Chart&) const = default;

  // Length of the coordinate vector carried by points of this chart.
  int ambient_dim() const {
    switch (kind) {
      case ChartKind::Euclidean:
        return n;
      case ChartKind::Hyperboloid:
        return n + 1;
      case ChartKind::Spd:
        return n * n;
    }
    return 0;
  }

  static Chart euclidean(int n) { return {ChartKind::Euclidean, n}; }
  static Chart hyperboloid(int n) { return {ChartKind::Hyperboloid, n}; }
  static Chart spd(int n) { return {ChartKind::Spd, n}; }
};

std::string to_string(const Chart& c);
Chart chart_from_name(const std::string& name, int n);

struct Point {
  Chart chart;
  Eigen::VectorXd coords;
};

struct Tangent {
  Point base;
  Eigen::VectorXd coords;
};

// Validating constructors. Ops assume their inputs were built through these
// (or are outputs of other ops) and only re-check chart compatibility.
Point make_point(const Chart& chart, Eigen::VectorXd coords);
Tangent make_tangent(Point base, Eigen::VectorXd coords);

void validate_point(const Point& p);
void validate_tangent(const Tangent& v);

// Matrix view helpers for the Spd chart.
Eigen::MatrixXd as_matrix(const Chart& chart, const Eigen::VectorXd& coords);
Eigen::VectorXd from_matrix(const Eigen::MatrixXd& m);

// Symmetric matrix functions used by the Spd chart (eigendecomposition based;
// eigenvalues clamped at tol::eigen_floor before the log).
Eigen::MatrixXd sym_exp(const Eigen::MatrixXd& s);
Eigen::MatrixXd sym_log(const Eigen::MatrixXd& s);
Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd& s);
Eigen::MatrixXd sym_inv_sqrt(const Eigen::MatrixXd& s);

Point exp_map(const Point& p, const Tangent& v);
Tangent log_map(const Point& p, const Point& q);
double dist(const Point& p, const Point& q);
Tangent transport(const Point& p, const Point& q, const Tangent& v);
double inner(const Point& p, const Tangent& u, const Tangent& v);
double norm(const Tangent& v);

Tangent zero_tangent(const Point& p);
// Project an ambient coordinate vector onto T_pM (Minkowski-orthogonal part
// for the hyperboloid, symmetric part for Spd; identity on the flat chart).
Tangent project_to_tangent(const Point& p, const Eigen::VectorXd& ambient);
Tangent add(const Tangent& u, const Tangent& v);
Tangent scale(double a, const Tangent& v);

// grad of q -> d^2(center, q) evaluated at p, i.e. -2 log_p(center).
Tangent grad_dist_sq(const Point& center, const Point& p);

// exp_p(t log_p q) for t in [0, 1].
Point geodesic_point(const Point& p, const Point& q, double t);

// Measured slacks of the two curvature comparison inequalities at a triple.
// Both are >= 0 in exact arithmetic on any Hadamard chart and identically
// zero in the flat chart.
std::pair<double, double> comparison_slacks(const Point& p1, const Point& p2, const Point& p3);

}  // namespace hmpp
