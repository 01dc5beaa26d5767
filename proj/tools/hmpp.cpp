#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "hmpp/serialize.hpp"

namespace {

using namespace hmpp;

// Exit codes: 0 success, 1 malformed input, 2 inner-solver failure,
// 3 budget exhaustion, 4 verification failure.
constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitInnerFailure = 2;
constexpr int kExitBudget = 3;
constexpr int kExitVerifyFailed = 4;

Schedule schedule_from_json(const json& j) {
  const double lambda = j.value("lambda", 1.0);
  Schedule s;
  const std::string rule = j.value("eps_rule", "exact");
  if (rule == "exact") {
    s = Schedule::constant_exact(lambda);
  } else if (rule == "geometric") {
    s = Schedule::geometric_eps(lambda, j.value("eps0", 1e-2));
  } else if (rule == "constant") {
    s = Schedule::constant_eps(lambda, j.value("eps0", 1e-2),
                               j.value("budget", 2.0 * j.value("eps0", 1e-2)));
  } else {
    throw InvariantViolation("unknown eps_rule: " + rule);
  }
  if (j.contains("budget")) s.eps_budget = j.at("budget").get<double>();
  s.lambda_lo = j.value("lambda_lo", lambda);
  s.lambda_hi = j.value("lambda_hi", lambda);
  return s;
}

StepPolicy policy_from_string(const std::string& name) {
  if (name == "exact") return StepPolicy::Exact;
  if (name == "residual_ball") return StepPolicy::ResidualBall;
  if (name == "value_gap") return StepPolicy::ValueGap;
  throw InvariantViolation("unknown policy: " + name);
}

int cmd_run(const std::string& config_path, std::string out_override) {
  json config;
  ProblemInstance problem;
  json problem_ref;
  Schedule schedule;
  StepPolicy policy = StepPolicy::Exact;
  StopRule stop;
  std::optional<double> radius;
  std::string out;
  try {
    std::ifstream in(config_path);
    if (!in) throw InvariantViolation("cannot open config: " + config_path);
    in >> config;
    if (config.contains("benchmark")) {
      BenchmarkSpec spec = load_benchmark(config.at("benchmark").get<std::string>());
      problem = spec.instance;
      problem_ref = json{{"benchmark", spec.name}, {"fixture", benchmark_to_json(spec)}};
    } else if (config.contains("problem")) {
      problem = problem_from_json(config.at("problem"));
      problem_ref = json{{"problem", config.at("problem")}};
    } else {
      throw InvariantViolation("config needs 'benchmark' or 'problem'");
    }
    schedule = config.contains("schedule") ? schedule_from_json(config.at("schedule"))
                                           : Schedule::constant_exact();
    schedule.validate();
    policy = policy_from_string(config.value("policy", "exact"));
    if (config.contains("stop")) {
      const json& st = config.at("stop");
      stop.max_outer = st.value("max_outer", stop.max_outer);
      stop.max_inner = st.value("max_inner", stop.max_inner);
      stop.dist_tol = st.value("dist_tol", stop.dist_tol);
      stop.residual_tol = st.value("residual_tol", stop.residual_tol);
    }
    if (config.contains("R")) radius = config.at("R").get<double>();
    out = out_override.empty() ? config.value("out", std::string("trace")) : out_override;
    if (!config.contains("seed")) throw InvariantViolation("config needs a 'seed'");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitBadInput;
  }

  try {
    ProxTrace trace = run_ippa(problem, schedule, stop, policy, radius);
    json run_params{{"policy", to_string(policy)},
                    {"lambda_lo", schedule.lambda_lo},
                    {"lambda_hi", schedule.lambda_hi},
                    {"budget", schedule.eps_budget},
                    {"R", radius ? json(*radius) : json(default_radius_bound(problem))},
                    {"seed", config.at("seed").get<std::uint64_t>()}};
    std::ofstream csv(out + ".csv", std::ios::binary);
    csv << trace_to_csv(trace);
    std::ofstream js(out + ".json", std::ios::binary);
    js << trace_to_json(trace, problem_ref, run_params).dump(2) << "\n";
    json summary = trace_summary_json(trace);
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
  } catch (const BudgetExhausted& e) {
    std::cerr << "budget exhausted at iteration " << e.iteration << ": " << e.what() << "\n";
    return kExitBudget;
  } catch (const InnerSolveFailure& e) {
    std::cerr << "inner solver failure (best residual " << e.best_residual << "): " << e.what()
              << "\n";
    return kExitInnerFailure;
  } catch (const std::exception& e) {
    std::cerr << "run error: " << e.what() << "\n";
    return kExitBadInput;
  }
}

int cmd_verify_geometry(const std::string& chart_name, int n, int samples, std::uint64_t seed,
                        bool self_test_corrupt) {
  Chart chart = chart_from_name(chart_name, n);
  if (self_test_corrupt) {
    // Inject an invalid point bypassing the validating constructor and make
    // sure validation flags it.
    Point bad = Sampler::origin(chart);
    bad.coords(0) += (chart.kind == ChartKind::Euclidean) ? 0.0 : 0.5;
    if (chart.kind == ChartKind::Euclidean) bad.coords.resize(0);
    try {
      validate_point(bad);
      std::cerr << "corrupted point was not detected\n";
      return kExitBadInput;
    } catch (const InvariantViolation& e) {
      std::cout << "invariant violation detected: " << e.what() << "\n";
      return kExitVerifyFailed;
    }
  }
  Sampler sampler(seed);
  double max_roundtrip = 0.0, max_isometry = 0.0;
  double min_slack1 = std::numeric_limits<double>::infinity();
  double min_slack2 = std::numeric_limits<double>::infinity();
  double max_abs_slack = 0.0;
  for (int i = 0; i < samples; ++i) {
    Point p = sampler.random_point(chart, 2.0);
    Tangent v = sampler.random_tangent(p, 5.0);
    Tangent back = log_map(p, exp_map(p, v));
    max_roundtrip = std::max(max_roundtrip, norm(add(back, scale(-1.0, v))));

    Point q = sampler.random_point(chart, 2.0);
    Tangent a = sampler.random_tangent(p, 2.0);
    Tangent b = sampler.random_tangent(p, 2.0);
    const double before = inner(p, a, b);
    const double after = inner(q, transport(p, q, a), transport(p, q, b));
    max_isometry = std::max(max_isometry, std::abs(after - before));

    Point p3 = sampler.random_point(chart, 2.0);
    auto [s1, s2] = comparison_slacks(p, q, p3);
    min_slack1 = std::min(min_slack1, s1);
    min_slack2 = std::min(min_slack2, s2);
    max_abs_slack = std::max({max_abs_slack, std::abs(s1), std::abs(s2)});
  }
  std::printf("chart=%s samples=%d\n", to_string(chart).c_str(), samples);
  std::printf("max roundtrip error   %s\n", format_g17(max_roundtrip).c_str());
  std::printf("max isometry error    %s\n", format_g17(max_isometry).c_str());
  std::printf("min comparison slacks %s %s\n", format_g17(min_slack1).c_str(),
              format_g17(min_slack2).c_str());
  bool ok = max_roundtrip <= tol::geometric && max_isometry <= tol::isometry &&
            min_slack1 >= -tol::geometric && min_slack2 >= -tol::geometric;
  if (chart.kind == ChartKind::Euclidean && max_abs_slack > 1e-10) ok = false;
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_verify_enlargement(const std::string& chart_name, int n, std::vector<double> eps_grid,
                           std::uint64_t seed) {
  Chart chart = chart_from_name(chart_name, n);
  if (eps_grid.empty()) eps_grid = {0.125, 0.5, 2.0};
  Sampler sampler(seed);
  bool ok = true;
  const bool flat = chart.kind == ChartKind::Euclidean;
  for (double eps : eps_grid) {
    double min_ball_slack = std::numeric_limits<double>::infinity();
    double min_subdiff_slack = std::numeric_limits<double>::infinity();
    double worst_violation = std::numeric_limits<double>::infinity();
    for (int c = 0; c < 8; ++c) {
      Point center = sampler.random_point(chart, 1.5);
      Point p = sampler.random_point(chart, 1.5);
      Tangent dir = sampler.random_tangent(p, 1.0);
      if (norm(dir) < tol::tiny_vector) continue;
      VectorFieldOracle X = grad_dist_sq_field(center);
      ConvexFunctionOracle f = dist_sq_function(center);
      WitnessSet W = make_witness_set(X, p, sampler);
      if (eps == 0.0) {
        // X^0 path: membership of the field value itself.
        min_ball_slack =
            std::min(min_ball_slack, enlargement_slack(X, 0.0, p, X.evaluate(p).front(), W));
        continue;
      }
      Tangent u = enlarged_ball_element(center, p, eps, dir);
      min_ball_slack = std::min(min_ball_slack, enlargement_slack(X, eps, p, u, W));
      Tangent us = eps_subgrad_ball_element(center, p, eps, dir);
      std::vector<Point> Wp;
      for (const Witness& w : W.entries) Wp.push_back(w.q);
      min_subdiff_slack = std::min(min_subdiff_slack, eps_subdiff_slack(f, p, us, eps, Wp));
      // Both example inclusions also nest: eps-subgradients are enlargement members.
      min_ball_slack = std::min(min_ball_slack, enlargement_slack(X, eps, p, us, W));
      // Inflated radius: refutation expected on the flat chart only.
      Tangent w_inflated = scale(2.0 * std::sqrt(2.0 * eps) * 1.01, scale(1.0 / norm(dir), dir));
      Tangent u_inflated = add(grad_dist_sq(center, p), w_inflated);
      auto ls = enlargement_line_search(X, eps, p, u_inflated, dir);
      worst_violation = std::min(worst_violation, ls.slack);
    }
    std::printf("eps=%g: min inclusion slack %s", eps, format_g17(min_ball_slack).c_str());
    if (eps > 0.0) std::printf(", min subdiff slack %s", format_g17(min_subdiff_slack).c_str());
    if (min_ball_slack < -tol::geometric) ok = false;
    if (eps > 0.0 && min_subdiff_slack < -tol::geometric) ok = false;
    if (eps > 0.0) {
      if (flat) {
        std::printf(", boundary violation %s", format_g17(worst_violation).c_str());
        if (!(worst_violation < 0.0)) ok = false;
      } else if (worst_violation >= 0.0) {
        std::printf(", inclusion strict or undetected");
      } else {
        std::printf(", boundary violation %s", format_g17(worst_violation).c_str());
      }
    }
    std::printf("\n");
  }
  // Sum and scaling rules on a few seeded cases.
  for (int c = 0; c < 4; ++c) {
    Point c1 = sampler.random_point(chart, 1.5);
    Point c2 = sampler.random_point(chart, 1.5);
    Point p = sampler.random_point(chart, 1.5);
    Tangent dir = sampler.random_tangent(p, 1.0);
    const double e1 = 0.2, e2 = 0.35, alpha = 1.7;
    VectorFieldOracle X1 = grad_dist_sq_field(c1);
    VectorFieldOracle X2 = grad_dist_sq_field(c2);
    VectorFieldOracle XS = field_sum(X1, X2);
    Tangent u1 = enlarged_ball_element(c1, p, e1, dir);
    Tangent u2 = enlarged_ball_element(c2, p, e2, dir);
    WitnessSet W = make_witness_set(XS, p, sampler);
    if (enlargement_slack(XS, e1 + e2, p, add(u1, u2), W) < -tol::geometric) ok = false;
    VectorFieldOracle Xa = field_scale(alpha, X1);
    WitnessSet Wa = make_witness_set(Xa, p, sampler);
    if (enlargement_slack(Xa, alpha * e1, p, scale(alpha, u1), Wa) < -tol::geometric) ok = false;
  }
  std::printf("algebra rules: %s\n", ok ? "pass" : "fail");
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_report(const std::string& trace_path) {
  json j;
  ProxTrace trace;
  Point reference;
  double lambda_lo = 1.0;
  double radius = 0.0;
  try {
    std::ifstream in(trace_path);
    if (!in) throw InvariantViolation("cannot open trace: " + trace_path);
    in >> j;
    trace = trace_from_json(j);
    if (trace.iterates.size() < 2) throw InvariantViolation("trace has no steps");
    const json& pref = j.at("problem");
    std::optional<Point> ref;
    if (pref.contains("benchmark")) {
      BenchmarkSpec spec = load_benchmark(pref.at("benchmark").get<std::string>());
      ref = spec.oracle_solution;
    } else if (pref.contains("problem")) {
      ProblemInstance prob = problem_from_json(pref.at("problem"));
      ref = prob.reference_solution;
    }
    if (!ref) throw InvariantViolation("trace problem has no reference solution");
    reference = *ref;
    lambda_lo = j.at("run").value("lambda_lo", 1.0);
    radius = j.at("run").value("R", 0.0);
  } catch (const std::exception& e) {
    std::cerr << "report error: " << e.what() << "\n";
    return kExitBadInput;
  }

  Schedule sched = Schedule::constant_exact(lambda_lo);
  sched.lambda_lo = lambda_lo;
  auto slacks = fejer_monitor(trace, reference, sched);
  std::printf("%6s %24s %24s\n", "k", "slack_main", "slack_fejer");
  bool ok = true;
  std::vector<double> eps_prime;
  for (std::size_t i = 0; i < slacks.size(); ++i) {
    std::printf("%6zu %24s %24s\n", i, format_g17(slacks[i].first).c_str(),
                format_g17(slacks[i].second).c_str());
    if (slacks[i].first < -tol::monitor || slacks[i].second < -tol::monitor) ok = false;
    eps_prime.push_back(trace.iterates[i + 1].eps / lambda_lo);
  }
  const double bound = radius > 0.0 ? 2.0 * radius : 1e6;
  if (!quasi_fejer_check(trace, {reference}, eps_prime, bound)) ok = false;
  std::printf("monitor: %s\n", ok ? "pass" : "fail");
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inexact proximal point solver for variational inequalities on Hadamard charts"};
  app.require_subcommand(1);

  std::string config_path, out_path, chart_name = "euclidean", trace_path;
  int n = 2, samples = 10000;
  std::uint64_t seed = 1;
  bool self_test_corrupt = false;
  std::vector<double> eps_grid;

  auto* run = app.add_subcommand("run", "execute a solver run from a JSON config");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--out", out_path, "output path base (overrides config)");

  auto* vg = app.add_subcommand("verify-geometry", "seeded geometry invariant suite");
  vg->add_option("--chart", chart_name, "euclidean|hyperboloid|spd");
  vg->add_option("--n", n, "dimension parameter");
  vg->add_option("--samples", samples, "sample count");
  vg->add_option("--seed", seed, "rng seed");
  vg->add_flag("--self-test-corrupt", self_test_corrupt, "inject an invalid point");

  auto* ve = app.add_subcommand("verify-enlargement", "enlargement inclusion and algebra checks");
  ve->add_option("--chart", chart_name, "euclidean|hyperboloid|spd");
  ve->add_option("--n", n, "dimension parameter");
  ve->add_option("--eps", eps_grid, "epsilon grid");
  ve->add_option("--seed", seed, "rng seed");

  auto* rp = app.add_subcommand("report", "recompute monitor slacks from a stored trace");
  rp->add_option("--trace", trace_path, "trace JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_path);
    if (vg->parsed()) return cmd_verify_geometry(chart_name, n, samples, seed, self_test_corrupt);
    if (ve->parsed()) return cmd_verify_enlargement(chart_name, n, eps_grid, seed);
    if (rp->parsed()) return cmd_report(trace_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
