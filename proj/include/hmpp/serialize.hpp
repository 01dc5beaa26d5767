#pragma once

#include <string>

#include <json.hpp>

#include "hmpp/problems.hpp"
#include "hmpp/solver.hpp"

namespace hmpp {

using json = nlohmann::json;

// Doubles in text formats are written with 17 significant digits.
std::string format_g17(double x);

json chart_to_json(const Chart& chart);
Chart chart_from_json(const json& j);

// {chart, n, coords[]} record shared by fixtures and traces.
json point_to_json(const Point& p);
Point point_from_json(const json& j);

// Field descriptors: {type: grad_dist_sq | identity | skew_plus_mu | sum |
// scaled | subdiff_sum_dist, params...}
json field_descriptor_grad_dist_sq(const Point& center);
VectorFieldOracle field_from_json(const json& j, const Chart& chart);

// Set descriptors: {set: ball | whole | ball_intersection, params...}
ConvexSetOracle set_from_json(const json& j, const Chart& chart);

// Inline problem descriptor -> instance (field, set, start, optional
// reference). Objectives are attached for descriptor types that are
// subdifferentials of a known convex function.
ProblemInstance problem_from_json(const json& j);

json benchmark_to_json(const BenchmarkSpec& spec);

std::string trace_to_csv(const ProxTrace& trace);
json trace_summary_json(const ProxTrace& trace);

// Full trace record: problem reference, schedule/policy parameters and the
// serialized iterates, sufficient to recompute every monitor quantity.
json trace_to_json(const ProxTrace& trace, const json& problem_ref, const json& run_params);
ProxTrace trace_from_json(const json& j);

}  // namespace hmpp
