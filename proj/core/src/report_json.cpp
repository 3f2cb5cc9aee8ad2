#include "unidemand/report_json.hpp"

#include "unidemand/instance_json.hpp"

namespace unidemand {

using nlohmann::json;

json rational_json(const Rational& value) { return to_string(value); }

json prices_json(const PriceVector& prices) {
  json out = json::array();
  for (const auto& p : prices) out.push_back(to_string(p));
  return out;
}

namespace {

json prices_decimal(const PriceVector& prices) {
  json out = json::array();
  for (const auto& p : prices) {
    if (p.is_infinite()) {
      out.push_back("inf");
    } else {
      out.push_back(to_double(p.value()));
    }
  }
  return out;
}

}  // namespace

json estimate_json(const Estimate& estimate) {
  return {{"mean", estimate.mean}, {"ci99", estimate.ci99}, {"samples", estimate.samples}};
}

json to_json(const MhrAnchor& anchor) {
  json rounds = json::array();
  for (const auto& r : anchor.rounds) {
    rounds.push_back({{"t", r.t},
                      {"beta_t", rational_json(r.beta_t)},
                      {"beta_t_decimal", to_double(r.beta_t)},
                      {"survivors", r.survivors}});
  }
  return {{"beta", rational_json(anchor.beta)},
          {"beta_decimal", to_double(anchor.beta)},
          {"eta", anchor.eta},
          {"padded_size", anchor.padded_size},
          {"rounds", rounds}};
}

json to_json(const RegularAnchor& anchor) {
  json points = json::array();
  for (std::size_t i = 0; i < anchor.anchor_points.size(); ++i) {
    points.push_back({{"a", rational_json(anchor.anchor_points[i])},
                      {"cdf", rational_json(anchor.anchor_cdf[i])}});
  }
  return {{"alpha", rational_json(anchor.alpha)},
          {"alpha_decimal", to_double(anchor.alpha)},
          {"c1", rational_json(anchor.c1)},
          {"c2", rational_json(anchor.c2)},
          {"anchor_points", points}};
}

json to_json(const AnchorReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    json entry = {{"name", c.name},
                  {"bound", c.bound},
                  {"estimate", c.estimate},
                  {"ci99", c.ci99},
                  {"pass", c.pass}};
    if (c.informational) entry["informational"] = true;
    checks.push_back(entry);
  }
  return {{"checks", checks}, {"pass", report.all_pass()}};
}

json to_json(const DiscretizationPlan& plan) {
  return {{"schedule", to_string(plan.schedule)},
          {"eps", plan.eps},
          {"eps_bound", plan.eps_bound},
          {"u_min", rational_json(plan.u_min)},
          {"u_max", rational_json(plan.u_max)},
          {"r", rational_json(plan.r)},
          {"delta", rational_json(plan.delta)},
          {"price_eps", rational_json(plan.price_eps)},
          {"price_low", rational_json(plan.price_low)},
          {"price_high", rational_json(plan.price_high)},
          {"back_map_divisor", rational_json((1 + plan.delta - plan.delta * plan.delta) *
                                             (1 + plan.delta))},
          {"value_grid_points_formula", plan.value_grid_points},
          {"price_grid_points_formula", plan.price_grid_points}};
}

json to_json(const RestrictedInstance& ri) {
  json values = json::array();
  for (const auto& v : ri.values) values.push_back(rational_json(v));
  json prices = json::array();
  for (const auto& p : ri.prices) prices.push_back(rational_json(p));
  json provenance = to_json(ri.plan);
  provenance["k1"] = ri.k1();
  provenance["k2"] = ri.k2();
  provenance["value_grid_last_index"] = ri.value_grid_last_index;
  return {{"instance", instance_to_json(ri.instance)},
          {"values", values},
          {"prices", prices},
          {"delta", rational_json(ri.delta)},
          {"provenance", provenance}};
}

json to_json(const SolveReport& report) {
  json out;
  out["solver"] = report.solver;
  if (!report.mode.empty()) out["mode"] = report.mode;
  out["prices"] = prices_json(report.prices);
  out["prices_decimal"] = prices_decimal(report.prices);
  if (report.predicted_revenue) {
    out["predicted_revenue"] = rational_json(*report.predicted_revenue);
    out["predicted_revenue_decimal"] = to_double(*report.predicted_revenue);
  } else {
    out["predicted_revenue"] = nullptr;
  }
  if (report.exact_revenue) {
    out["exact_revenue"] = rational_json(*report.exact_revenue);
    out["exact_revenue_decimal"] = to_double(*report.exact_revenue);
  } else {
    out["exact_revenue"] = nullptr;
  }
  if (report.estimate) out["monte_carlo_revenue"] = estimate_json(*report.estimate);
  json layers = json::array();
  for (std::size_t i = 0; i < report.layer_sizes.size(); ++i) {
    layers.push_back({{"i", i}, {"states", report.layer_sizes[i]}});
  }
  out["layers"] = layers;
  out["provenance"] = report.provenance;
  return out;
}

}  // namespace unidemand
