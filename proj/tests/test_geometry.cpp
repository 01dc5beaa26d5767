#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hmpp/geometry.hpp"
#include "hmpp/sampling.hpp"

using namespace hmpp;

namespace {

Point e2(double x, double y) {
  return make_point(Chart::euclidean(2), Eigen::Vector2d(x, y));
}

Point h2(double t, double x, double y) {
  return make_point(Chart::hyperboloid(2), Eigen::Vector3d(t, x, y));
}

Point spd2(const Eigen::Matrix2d& m) {
  return make_point(Chart::spd(2), from_matrix(m));
}

const std::vector<Chart> kCharts{Chart::euclidean(2), Chart::euclidean(3),
                                 Chart::hyperboloid(2), Chart::hyperboloid(3),
                                 Chart::spd(2), Chart::spd(3)};

}  // namespace

TEST_CASE("point validation") {
  CHECK_THROWS_AS(make_point(Chart::hyperboloid(2), Eigen::Vector3d(1.0, 0.5, 0.0)),
                  InvariantViolation);
  CHECK_THROWS_AS(make_point(Chart::hyperboloid(2), Eigen::Vector3d(-1.0, 0.0, 0.0)),
                  InvariantViolation);
  Eigen::Matrix2d neg;
  neg << 1.0, 0.0, 0.0, -2.0;
  CHECK_THROWS_AS(make_point(Chart::spd(2), from_matrix(neg)), InvariantViolation);
  Eigen::Matrix2d asym;
  asym << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(make_point(Chart::spd(2), from_matrix(asym)), InvariantViolation);
  CHECK_THROWS_AS(dist(e2(0, 0), h2(1, 0, 0)), ChartMismatch);
}

TEST_CASE("exp_map closed forms") {
  Point p = e2(0, 0);
  Point q = exp_map(p, make_tangent(p, Eigen::Vector2d(1, 2)));
  CHECK(q.coords(0) == doctest::Approx(1.0));
  CHECK(q.coords(1) == doctest::Approx(2.0));

  Point apex = h2(1, 0, 0);
  Point hq = exp_map(apex, make_tangent(apex, Eigen::Vector3d(0, 1, 0)));
  CHECK(hq.coords(0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
  CHECK(hq.coords(1) == doctest::Approx(std::sinh(1.0)).epsilon(1e-12));
  CHECK(hq.coords(2) == doctest::Approx(0.0));

  Point id = spd2(Eigen::Matrix2d::Identity());
  Eigen::Matrix2d v;
  v << 1.0, 0.0, 0.0, 0.0;
  Point sq = exp_map(id, make_tangent(id, from_matrix(v)));
  Eigen::Matrix2d m = as_matrix(sq.chart, sq.coords);
  CHECK(m(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(m(1, 1) == doctest::Approx(1.0));
  CHECK(m(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("log_map closed forms") {
  Tangent t = log_map(e2(1, 1), e2(3, 1));
  CHECK(t.coords(0) == doctest::Approx(2.0));
  CHECK(t.coords(1) == doctest::Approx(0.0));

  Point apex = h2(1, 0, 0);
  Tangent th = log_map(apex, h2(std::cosh(2.0), std::sinh(2.0), 0.0));
  CHECK(th.coords(0) == doctest::Approx(0.0));
  CHECK(th.coords(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(th.coords(2) == doctest::Approx(0.0));

  Eigen::Matrix2d q;
  q << std::exp(2.0), 0.0, 0.0, 1.0;
  Tangent ts = log_map(spd2(Eigen::Matrix2d::Identity()), spd2(q));
  Eigen::Matrix2d m = as_matrix(Chart::spd(2), ts.coords);
  CHECK(m(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("dist closed forms") {
  CHECK(dist(e2(0, 0), e2(3, 4)) == doctest::Approx(5.0));
  CHECK(dist(h2(1, 0, 0), h2(std::cosh(2.0), std::sinh(2.0), 0.0)) ==
        doctest::Approx(2.0).epsilon(1e-12));
  Eigen::Matrix2d q;
  q << std::exp(1.0), 0.0, 0.0, 1.0;
  CHECK(dist(spd2(Eigen::Matrix2d::Identity()), spd2(q)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dist(e2(1, 2), e2(1, 2)) == doctest::Approx(0.0));
}

TEST_CASE("transport closed forms") {
  // Flat chart: coordinates unchanged.
  Tangent t = transport(e2(0, 0), e2(5, -1), make_tangent(e2(0, 0), Eigen::Vector2d(1, 2)));
  CHECK(t.coords(0) == doctest::Approx(1.0));
  CHECK(t.coords(1) == doctest::Approx(2.0));

  // Orthogonal-to-geodesic-plane component is fixed on the hyperboloid.
  Point apex = h2(1, 0, 0);
  Point hq = h2(std::cosh(1.0), std::sinh(1.0), 0.0);
  Tangent th = transport(apex, hq, make_tangent(apex, Eigen::Vector3d(0, 0, 1)));
  CHECK(th.coords(0) == doctest::Approx(0.0));
  CHECK(th.coords(1) == doctest::Approx(0.0));
  CHECK(th.coords(2) == doctest::Approx(1.0).epsilon(1e-12));

  // Spd roundtrip.
  Point id = spd2(Eigen::Matrix2d::Identity());
  Eigen::Matrix2d qm;
  qm << 2.0, 0.4, 0.4, 1.3;
  Point q = spd2(qm);
  Eigen::Matrix2d vm;
  vm << 0.3, -0.2, -0.2, 0.9;
  Tangent v = make_tangent(id, from_matrix(vm));
  Tangent back = transport(q, id, transport(id, q, v));
  CHECK(norm(add(back, scale(-1.0, v))) <= 1e-9);
  // transport(p, p, v) = v
  Tangent same = transport(id, id, v);
  CHECK((same.coords - v.coords).norm() == doctest::Approx(0.0));
}

TEST_CASE("inner closed forms") {
  Point p = e2(0, 0);
  CHECK(inner(p, make_tangent(p, Eigen::Vector2d(1, 0)), make_tangent(p, Eigen::Vector2d(0, 1))) ==
        doctest::Approx(0.0));
  Point id = spd2(Eigen::Matrix2d::Identity());
  Tangent u = make_tangent(id, from_matrix(Eigen::Matrix2d::Identity()));
  CHECK(inner(id, u, u) == doctest::Approx(2.0));
  Point apex = h2(1, 0, 0);
  Tangent h = make_tangent(apex, Eigen::Vector3d(0, 1, 0));
  CHECK(inner(apex, h, h) == doctest::Approx(1.0));
}

TEST_CASE("grad_dist_sq") {
  Tangent g = grad_dist_sq(e2(1, 1), e2(0, 0));
  CHECK(g.coords(0) == doctest::Approx(-2.0));
  CHECK(g.coords(1) == doctest::Approx(-2.0));
  CHECK(norm(grad_dist_sq(e2(1, 1), e2(1, 1))) == doctest::Approx(0.0));
  Tangent gh = grad_dist_sq(h2(std::cosh(1.0), std::sinh(1.0), 0.0), h2(1, 0, 0));
  CHECK(gh.coords(1) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("geodesic_point") {
  Point m = geodesic_point(e2(0, 0), e2(2, 0), 0.5);
  CHECK(m.coords(0) == doctest::Approx(1.0));
  Point p = h2(1, 0, 0), q = h2(std::cosh(1.0), std::sinh(1.0), 0.0);
  CHECK(dist(geodesic_point(p, q, 0.0), p) == doctest::Approx(0.0));
  CHECK(dist(geodesic_point(p, q, 1.0), q) == doctest::Approx(0.0));
  Eigen::Matrix2d qm;
  qm << std::exp(2.0), 0.0, 0.0, 1.0;
  Point sm = geodesic_point(spd2(Eigen::Matrix2d::Identity()), spd2(qm), 0.5);
  CHECK(as_matrix(Chart::spd(2), sm.coords)(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(geodesic_point(p, q, 1.5), InvariantViolation);
  CHECK_THROWS_AS(geodesic_point(p, q, -0.1), InvariantViolation);
}

TEST_CASE("comparison slack examples") {
  auto [s1, s2] = comparison_slacks(e2(0.3, -1), e2(2, 0.5), e2(-1, 1));
  CHECK(std::abs(s1) <= 1e-10);
  CHECK(std::abs(s2) <= 1e-10);

  Point p1 = h2(std::cosh(1.0), std::sinh(1.0), 0.0);
  Point p2 = h2(std::cosh(1.0), 0.0, std::sinh(1.0));
  Point p3 = h2(1, 0, 0);
  auto [h1v, h2v] = comparison_slacks(p1, p2, p3);
  // d(p1,p2) = arccosh(cosh^2 1), d(p1,p3) = d(p2,p3) = 1, <log,log> = 0.
  const double d12 = std::acosh(std::cosh(1.0) * std::cosh(1.0));
  CHECK(h1v == doctest::Approx(d12 * d12 - 2.0).epsilon(1e-9));
  CHECK(h1v > 0.2);
  CHECK(h2v >= -1e-10);

  auto [z1, z2] = comparison_slacks(p3, p3, p3);
  CHECK(std::abs(z1) <= 1e-12);
  CHECK(std::abs(z2) <= 1e-12);
}

TEST_CASE("roundtrip and isometry properties per chart") {
  for (const Chart& chart : kCharts) {
    CAPTURE(to_string(chart));
    Sampler sampler(7);
    double max_round = 0.0, max_iso = 0.0, max_dn = 0.0, min_s1 = 1.0, min_s2 = 1.0;
    for (int i = 0; i < 1000; ++i) {
      Point p = sampler.random_point(chart, 2.0);
      Tangent v = sampler.random_tangent(p, 5.0);
      Point q = exp_map(p, v);
      Tangent back = log_map(p, q);
      max_round = std::max(max_round, norm(add(back, scale(-1.0, v))));
      max_dn = std::max(max_dn, std::abs(dist(p, q) - norm(back)));
      Point r = sampler.random_point(chart, 2.0);
      Tangent a = sampler.random_tangent(p, 2.0);
      Tangent b = sampler.random_tangent(p, 2.0);
      max_iso = std::max(max_iso,
                         std::abs(inner(r, transport(p, r, a), transport(p, r, b)) -
                                  inner(p, a, b)));
      auto [s1, s2] = comparison_slacks(p, q, r);
      min_s1 = std::min(min_s1, s1);
      min_s2 = std::min(min_s2, s2);
    }
    CHECK(max_round <= tol::geometric);
    CHECK(max_dn <= tol::isometry);
    CHECK(max_iso <= tol::isometry);
    CHECK(min_s1 >= -tol::geometric);
    CHECK(min_s2 >= -tol::geometric);
  }
}

TEST_CASE("grad_dist_sq points away from the center along geodesics") {
  for (const Chart& chart : kCharts) {
    Sampler sampler(11);
    Point c = sampler.random_point(chart, 1.0);
    for (int i = 0; i < 50; ++i) {
      Point p = sampler.random_point(chart, 1.5);
      if (dist(p, c) < 1e-6) continue;
      Tangent g = grad_dist_sq(c, p);
      CHECK(inner(p, g, log_map(p, c)) < 0.0);
    }
  }
}
