#include "hmpp/geometry.hpp"

#include <cmath>

namespace hmpp {

namespace {

void require_same_chart(const Chart& a, const Chart& b, const char* where) {
  if (!(a == b)) {
    throw ChartMismatch(std::string(where) + ": mixed charts " + to_string(a) + " vs " +
                        to_string(b));
  }
}

// Minkowski bilinear form on the ambient space of the hyperboloid.
double mink(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return -a(0) * b(0) + a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
}

// Rescale onto the sheet <p,p>_L = -1 to control drift after exp_map.
Eigen::VectorXd renormalize_sheet(Eigen::VectorXd p) {
  const double q = -mink(p, p);
  if (q <= 0.0) throw InvariantViolation("hyperboloid point left the timelike cone");
  p /= std::sqrt(q);
  if (p(0) < 0.0) p = -p;
  return p;
}

Eigen::MatrixXd sym_apply(const Eigen::MatrixXd& s, double (*f)(double), bool clamp) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  Eigen::VectorXd l = eig.eigenvalues();
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    double v = clamp ? std::max(l(i), tol::eigen_floor) : l(i);
    l(i) = f(v);
  }
  Eigen::MatrixXd r = eig.eigenvectors() * l.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (r + r.transpose());
}

}  // namespace

std::string to_string(const Chart& c) {
  switch (c.kind) {
    case ChartKind::Euclidean:
      return "euclidean(" + std::to_string(c.n) + ")";
    case ChartKind::Hyperboloid:
      return "hyperboloid(" + std::to_string(c.n) + ")";
    case ChartKind::Spd:
      return "spd(" + std::to_string(c.n) + ")";
  }
  return "?";
}

Chart chart_from_name(const std::string& name, int n) {
  if (name == "euclidean") return Chart::euclidean(n);
  if (name == "hyperboloid") return Chart::hyperboloid(n);
  if (name == "spd") return Chart::spd(n);
  throw InvariantViolation("unknown chart name: " + name);
}

Eigen::MatrixXd as_matrix(const Chart& chart, const Eigen::VectorXd& coords) {
  return Eigen::Map<const Eigen::MatrixXd>(coords.data(), chart.n, chart.n);
}

Eigen::VectorXd from_matrix(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd sym_exp(const Eigen::MatrixXd& s) {
  return sym_apply(s, [](double x) { return std::exp(x); }, false);
}

Eigen::MatrixXd sym_log(const Eigen::MatrixXd& s) {
  return sym_apply(s, [](double x) { return std::log(x); }, true);
}

Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd& s) {
  return sym_apply(s, [](double x) { return std::sqrt(x); }, true);
}

Eigen::MatrixXd sym_inv_sqrt(const Eigen::MatrixXd& s) {
  return sym_apply(s, [](double x) { return 1.0 / std::sqrt(x); }, true);
}

void validate_point(const Point& p) {
  if (p.chart.n < 1) throw InvariantViolation("chart dimension must be >= 1");
  if (p.coords.size() != p.chart.ambient_dim()) {
    throw InvariantViolation("point coordinate length does not match chart");
  }
  switch (p.chart.kind) {
    case ChartKind::Euclidean:
      break;
    case ChartKind::Hyperboloid: {
      if (std::abs(mink(p.coords, p.coords) + 1.0) > tol::sheet) {
        throw InvariantViolation("hyperboloid point off the sheet");
      }
      if (p.coords(0) <= 0.0) {
        throw InvariantViolation("hyperboloid point on the wrong sheet");
      }
      break;
    }
    case ChartKind::Spd: {
      Eigen::MatrixXd m = as_matrix(p.chart, p.coords);
      if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol::structural) {
        throw InvariantViolation("spd point is not symmetric");
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()));
      if (eig.eigenvalues().minCoeff() <= 0.0) {
        throw InvariantViolation("spd point is not positive definite");
      }
      break;
    }
  }
}

void validate_tangent(const Tangent& v) {
  validate_point(v.base);
  if (v.coords.size() != v.base.chart.ambient_dim()) {
    throw InvariantViolation("tangent coordinate length does not match chart");
  }
  switch (v.base.chart.kind) {
    case ChartKind::Hyperboloid: {
      if (std::abs(mink(v.base.coords, v.coords)) > tol::sheet * (1.0 + v.coords.norm())) {
        throw InvariantViolation("hyperboloid tangent not orthogonal to base");
      }
      break;
    }
    case ChartKind::Spd: {
      Eigen::MatrixXd m = as_matrix(v.base.chart, v.coords);
      if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol::structural) {
        throw InvariantViolation("spd tangent is not symmetric");
      }
      break;
    }
    case ChartKind::Euclidean:
      break;
  }
}

Point make_point(const Chart& chart, Eigen::VectorXd coords) {
  Point p{chart, std::move(coords)};
  validate_point(p);
  return p;
}

Tangent make_tangent(Point base, Eigen::VectorXd coords) {
  Tangent v{std::move(base), std::move(coords)};
  validate_tangent(v);
  return v;
}

Point exp_map(const Point& p, const Tangent& v) {
  require_same_chart(p.chart, v.base.chart, "exp_map");
  const double nv = norm(v);
  if (nv == 0.0) return p;
  switch (p.chart.kind) {
    case ChartKind::Euclidean:
      return Point{p.chart, p.coords + v.coords};
    case ChartKind::Hyperboloid: {
      Eigen::VectorXd r =
          std::cosh(nv) * p.coords + (std::sinh(nv) / nv) * v.coords;
      return Point{p.chart, renormalize_sheet(std::move(r))};
    }
    case ChartKind::Spd: {
      Eigen::MatrixXd P = as_matrix(p.chart, p.coords);
      Eigen::MatrixXd V = as_matrix(p.chart, v.coords);
      Eigen::MatrixXd hs = sym_sqrt(P);
      Eigen::MatrixXd ihs = sym_inv_sqrt(P);
      Eigen::MatrixXd r = hs * sym_exp(ihs * V * ihs) * hs;
      return Point{p.chart, from_matrix(0.5 * (r + r.transpose()))};
    }
  }
  throw InvariantViolation("unreachable chart kind");
}

Tangent log_map(const Point& p, const Point& q) {
  require_same_chart(p.chart, q.chart, "log_map");
  switch (p.chart.kind) {
    case ChartKind::Euclidean:
      return Tangent{p, q.coords - p.coords};
    case ChartKind::Hyperboloid: {
      const double alpha = std::max(1.0, -mink(p.coords, q.coords));
      const double theta = dist(p, q);
      Eigen::VectorXd w = q.coords - alpha * p.coords;
      // |w|_L = sinh(theta); the ratio theta/sinh(theta) -> 1 as theta -> 0.
      const double s = std::sinh(theta);
      double factor = (theta < 1e-9) ? 1.0 : theta / s;
      return Tangent{p, factor * w};
    }
    case ChartKind::Spd: {
      Eigen::MatrixXd P = as_matrix(p.chart, p.coords);
      Eigen::MatrixXd Q = as_matrix(p.chart, q.coords);
      Eigen::MatrixXd hs = sym_sqrt(P);
      Eigen::MatrixXd ihs = sym_inv_sqrt(P);
      Eigen::MatrixXd r = hs * sym_log(ihs * Q * ihs) * hs;
      return Tangent{p, from_matrix(0.5 * (r + r.transpose()))};
    }
  }
  throw InvariantViolation("unreachable chart kind");
}

double dist(const Point& p, const Point& q) {
  require_same_chart(p.chart, q.chart, "dist");
  switch (p.chart.kind) {
    case ChartKind::Euclidean:
      return (p.coords - q.coords).norm();
    case ChartKind::Hyperboloid: {
      // acosh(-<p,q>_L) loses half the digits near coincident points; the
      // chordal form 2 asinh(|p-q|_L / 2) is exact for all separations.
      const Eigen::VectorXd w = p.coords - q.coords;
      const double s = std::max(0.0, mink(w, w));
      return 2.0 * std::asinh(0.5 * std::sqrt(s));
    }
    case ChartKind::Spd: {
      Eigen::MatrixXd ihs = sym_inv_sqrt(as_matrix(p.chart, p.coords));
      Eigen::MatrixXd Q = as_matrix(p.chart, q.coords);
      return sym_log(ihs * Q * ihs).norm();
    }
  }
  throw InvariantViolation("unreachable chart kind");
}

double inner(const Point& p, const Tangent& u, const Tangent& v) {
  require_same_chart(p.chart, u.base.chart, "inner");
  require_same_chart(p.chart, v.base.chart, "inner");
  switch (p.chart.kind) {
    case ChartKind::Euclidean:
      return u.coords.dot(v.coords);
    case ChartKind::Hyperboloid:
      return mink(u.coords, v.coords);
    case ChartKind::Spd: {
      Eigen::MatrixXd Pi = as_matrix(p.chart, p.coords).inverse();
      Eigen::MatrixXd U = as_matrix(p.chart, u.coords);
      Eigen::MatrixXd V = as_matrix(p.chart, v.coords);
      return (Pi * U * Pi * V).trace();
    }
  }
  throw InvariantViolation("unreachable chart kind");
}

double norm(const Tangent& v) {
  const double g = inner(v.base, v, v);
  return std::sqrt(std::max(0.0, g));
}

Tangent transport(const Point& p, const Point& q, const Tangent& v) {
  require_same_chart(p.chart, q.chart, "transport");
  require_same_chart(p.chart, v.base.chart, "transport");
  const double d = dist(p, q);
  if (d < tol::tiny_vector) return Tangent{q, v.coords};
  switch (p.chart.kind) {
    case ChartKind::Euclidean:
      return Tangent{q, v.coords};
    case ChartKind::Hyperboloid: {
      // Transport along the geodesic: subtract twice the mixed projection on
      // the span of the endpoint logs.
      Tangent lpq = log_map(p, q);
      Tangent lqp = log_map(q, p);
      const double c = mink(lpq.coords, v.coords) / (d * d);
      return Tangent{q, v.coords - c * (lpq.coords + lqp.coords)};
    }
    case ChartKind::Spd: {
      Eigen::MatrixXd P = as_matrix(p.chart, p.coords);
      Eigen::MatrixXd Q = as_matrix(p.chart, q.coords);
      Eigen::MatrixXd hs = sym_sqrt(P);
      Eigen::MatrixXd ihs = sym_inv_sqrt(P);
      Eigen::MatrixXd S = sym_log(ihs * Q * ihs);
      Eigen::MatrixXd E = hs * sym_exp(0.5 * S) * ihs;
      Eigen::MatrixXd V = as_matrix(p.chart, v.coords);
      Eigen::MatrixXd r = E * V * E.transpose();
      return Tangent{q, from_matrix(0.5 * (r + r.transpose()))};
    }
  }
  throw InvariantViolation("unreachable chart kind");
}

Tangent zero_tangent(const Point& p) {
  return Tangent{p, Eigen::VectorXd::Zero(p.chart.ambient_dim())};
}

Tangent project_to_tangent(const Point& p, const Eigen::VectorXd& ambient) {
  if (ambient.size() != p.chart.ambient_dim()) {
    throw InvariantViolation("project_to_tangent: wrong ambient dimension");
  }
  switch (p.chart.kind) {
    case ChartKind::Euclidean:
      return Tangent{p, ambient};
    case ChartKind::Hyperboloid:
      return Tangent{p, ambient + mink(p.coords, ambient) * p.coords};
    case ChartKind::Spd: {
      Eigen::MatrixXd m = as_matrix(p.chart, ambient);
      return Tangent{p, from_matrix(0.5 * (m + m.transpose()))};
    }
  }
  throw InvariantViolation("unreachable chart kind");
}

Tangent add(const Tangent& u, const Tangent& v) {
  require_same_chart(u.base.chart, v.base.chart, "tangent add");
  return Tangent{u.base, u.coords + v.coords};
}

Tangent scale(double a, const Tangent& v) { return Tangent{v.base, a * v.coords}; }

Tangent grad_dist_sq(const Point& center, const Point& p) {
  return scale(-2.0, log_map(p, center));
}

Point geodesic_point(const Point& p, const Point& q, double t) {
  if (t < 0.0 || t > 1.0) {
    throw InvariantViolation("geodesic parameter outside [0, 1]");
  }
  if (t == 0.0) return p;
  if (t == 1.0) return q;
  return exp_map(p, scale(t, log_map(p, q)));
}

std::pair<double, double> comparison_slacks(const Point& p1, const Point& p2, const Point& p3) {
  require_same_chart(p1.chart, p2.chart, "comparison_slacks");
  require_same_chart(p1.chart, p3.chart, "comparison_slacks");
  const double d12 = dist(p1, p2);
  const double d13 = dist(p1, p3);
  const double d23 = dist(p2, p3);
  Tangent l31 = log_map(p3, p1);
  Tangent l32 = log_map(p3, p2);
  Tangent l21 = log_map(p2, p1);
  Tangent l23 = log_map(p2, p3);
  const double first = d12 * d12 - (d13 * d13 + d23 * d23 - 2.0 * inner(p3, l31, l32));
  const double second = inner(p2, l21, l23) + inner(p3, l31, l32) - d23 * d23;
  return {first, second};
}

}  // namespace hmpp
