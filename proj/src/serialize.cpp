#include "hmpp/serialize.hpp"

#include <cstdio>

namespace hmpp {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json chart_to_json(const Chart& chart) {
  const char* kind = nullptr;
  switch (chart.kind) {
    case ChartKind::Euclidean:
      kind = "euclidean";
      break;
    case ChartKind::Hyperboloid:
      kind = "hyperboloid";
      break;
    case ChartKind::Spd:
      kind = "spd";
      break;
  }
  return json{{"kind", kind}, {"n", chart.n}};
}

Chart chart_from_json(const json& j) {
  return chart_from_name(j.at("kind").get<std::string>(), j.at("n").get<int>());
}

json point_to_json(const Point& p) {
  json coords = json::array();
  for (Eigen::Index i = 0; i < p.coords.size(); ++i) coords.push_back(p.coords(i));
  json j = chart_to_json(p.chart);
  j["coords"] = std::move(coords);
  return j;
}

Point point_from_json(const json& j) {
  Chart chart = chart_from_json(j);
  const auto& coords = j.at("coords");
  Eigen::VectorXd c(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) c(static_cast<Eigen::Index>(i)) = coords[i];
  return make_point(chart, std::move(c));
}

json field_descriptor_grad_dist_sq(const Point& center) {
  return json{{"type", "grad_dist_sq"}, {"center", point_to_json(center)}};
}

VectorFieldOracle field_from_json(const json& j, const Chart& chart) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "grad_dist_sq") {
    return grad_dist_sq_field(point_from_json(j.at("center")));
  }
  if (type == "identity") {
    return identity_field(chart);
  }
  if (type == "skew_plus_mu") {
    Point shift = j.contains("shift")
                      ? point_from_json(j.at("shift"))
                      : Point{chart, Eigen::VectorXd::Zero(chart.ambient_dim())};
    Eigen::MatrixXd A;
    if (j.contains("A")) {
      const auto& rows = j.at("A");
      A.resize(rows.size(), rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
          A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    } else {
      A = Eigen::MatrixXd::Zero(chart.n, chart.n);
      if (chart.n >= 2) {
        A(0, 1) = 1.0;
        A(1, 0) = -1.0;
      }
    }
    return skew_plus_mu_field(A, j.at("mu").get<double>(), shift);
  }
  if (type == "sum") {
    const auto& parts = j.at("fields");
    if (parts.empty()) throw InvariantViolation("field descriptor: empty sum");
    VectorFieldOracle acc = field_from_json(parts[0], chart);
    for (std::size_t i = 1; i < parts.size(); ++i) {
      acc = field_sum(acc, field_from_json(parts[i], chart));
    }
    return acc;
  }
  if (type == "scaled") {
    return field_scale(j.at("alpha").get<double>(), field_from_json(j.at("field"), chart));
  }
  if (type == "subdiff_sum_dist") {
    std::vector<Point> anchors;
    for (const auto& a : j.at("anchors")) anchors.push_back(point_from_json(a));
    return sum_dist_subdiff_field(anchors);
  }
  throw InvariantViolation("unknown field descriptor type: " + type);
}

ConvexSetOracle set_from_json(const json& j, const Chart& chart) {
  const std::string kind = j.at("set").get<std::string>();
  if (kind == "whole") return whole_manifold(chart);
  if (kind == "ball") {
    return ball_set(point_from_json(j.at("center")), j.at("r").get<double>());
  }
  if (kind == "ball_intersection") {
    std::vector<std::pair<Point, double>> balls;
    for (const auto& b : j.at("balls")) {
      balls.emplace_back(point_from_json(b.at("center")), b.at("r").get<double>());
    }
    return ball_intersection(balls);
  }
  throw InvariantViolation("unknown set descriptor: " + kind);
}

ProblemInstance problem_from_json(const json& j) {
  ProblemInstance prob;
  prob.chart = chart_from_json(j.at("chart"));
  prob.field = field_from_json(j.at("field"), prob.chart);
  prob.set = set_from_json(j.at("set"), prob.chart);
  prob.start = j.contains("start") ? point_from_json(j.at("start"))
                                   : prob.set.project(Sampler::origin(prob.chart));
  if (j.contains("reference")) prob.reference_solution = point_from_json(j.at("reference"));
  if (j.contains("lipschitz")) prob.lipschitz = j.at("lipschitz").get<double>();
  // Gradient-of-convex descriptors carry their objective for the value-gap path.
  const std::string type = j.at("field").at("type").get<std::string>();
  if (type == "grad_dist_sq") {
    prob.objective = dist_sq_function(point_from_json(j.at("field").at("center")));
  } else if (type == "subdiff_sum_dist") {
    std::vector<Point> anchors;
    for (const auto& a : j.at("field").at("anchors")) anchors.push_back(point_from_json(a));
    prob.objective = sum_dist_function(anchors);
  }
  return prob;
}

json benchmark_to_json(const BenchmarkSpec& spec) {
  return json{{"name", spec.name},
              {"chart", chart_to_json(spec.instance.chart)},
              {"oracle", point_to_json(spec.oracle_solution)},
              {"oracle_kind", to_string(spec.oracle_kind)}};
}

std::string trace_to_csv(const ProxTrace& trace) {
  std::string out = "k,lambda,eps_certified,residual,inner_iters,dist_to_ref,slack_main,slack_fejer\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? format_g17(*v) : std::string("");
  };
  for (const IterateRecord& r : trace.iterates) {
    out += std::to_string(r.k) + "," + format_g17(r.lambda) + "," + format_g17(r.eps) + "," +
           format_g17(r.cert.residual_norm) + "," + std::to_string(r.inner_iters) + "," +
           opt(r.dist_to_ref) + "," + opt(r.slack_main) + "," + opt(r.slack_fejer) + "\n";
  }
  return out;
}

json trace_summary_json(const ProxTrace& trace) {
  if (trace.iterates.empty()) {
    return json{{"iterations", 0}, {"final_residual", nullptr}, {"final_dist", nullptr},
                {"budget_used", 0.0}};
  }
  const IterateRecord& last = trace.iterates.back();
  json j{{"iterations", static_cast<int>(trace.iterates.size()) - 1},
         {"final_residual", last.cert.residual_norm},
         {"budget_used", trace.budget_used}};
  j["final_dist"] = last.dist_to_ref ? json(*last.dist_to_ref) : json(nullptr);
  return j;
}

json trace_to_json(const ProxTrace& trace, const json& problem_ref, const json& run_params) {
  json iters = json::array();
  for (const IterateRecord& r : trace.iterates) {
    json rec{{"k", r.k},
             {"point", point_to_json(r.p)},
             {"lambda", r.lambda},
             {"eps_certified", r.eps},
             {"certificate", to_string(r.cert.kind)},
             {"residual", r.cert.residual_norm},
             {"inner_iters", r.inner_iters}};
    if (r.dist_to_ref) rec["dist_to_ref"] = *r.dist_to_ref;
    if (r.slack_main) rec["slack_main"] = *r.slack_main;
    if (r.slack_fejer) rec["slack_fejer"] = *r.slack_fejer;
    iters.push_back(std::move(rec));
  }
  return json{{"problem", problem_ref},
              {"run", run_params},
              {"iterates", std::move(iters)},
              {"summary", trace_summary_json(trace)}};
}

ProxTrace trace_from_json(const json& j) {
  ProxTrace trace;
  for (const auto& rec : j.at("iterates")) {
    IterateRecord r;
    r.k = rec.at("k").get<int>();
    r.p = point_from_json(rec.at("point"));
    r.lambda = rec.at("lambda").get<double>();
    r.eps = rec.at("eps_certified").get<double>();
    r.cert.residual_norm = rec.at("residual").get<double>();
    r.cert.eps_claimed = r.eps;
    r.inner_iters = rec.at("inner_iters").get<int>();
    if (rec.contains("dist_to_ref")) r.dist_to_ref = rec.at("dist_to_ref").get<double>();
    if (rec.contains("slack_main")) r.slack_main = rec.at("slack_main").get<double>();
    if (rec.contains("slack_fejer")) r.slack_fejer = rec.at("slack_fejer").get<double>();
    trace.iterates.push_back(std::move(r));
  }
  if (j.contains("summary") && j.at("summary").contains("budget_used")) {
    trace.budget_used = j.at("summary").at("budget_used").get<double>();
  }
  return trace;
}

}  // namespace hmpp
