#include "unidemand/pipeline.hpp"

#include <map>

#include "unidemand/anchoring.hpp"
#include "unidemand/dp_solver.hpp"
#include "unidemand/errors.hpp"
#include "unidemand/oracle.hpp"
#include "unidemand/reductions.hpp"
#include "unidemand/report_json.hpp"

namespace unidemand {
namespace {

using nlohmann::json;

json bounds_json(const ValueBounds& b) {
  return {{"low_cut", rational_json(b.low_cut)},
          {"low_point", rational_json(b.low_point)},
          {"high_cut", rational_json(b.high_cut)}};
}

void run_dp_pipeline(const Instance& instance, const SolveOptions& options, SolveReport& report) {
  json& provenance = report.provenance;
  if (instance.value_class == ValueClass::Untagged && !instance.all_discrete()) {
    throw InputError("oracle instances need a \"class\" tag (\"mhr\" or \"regular\") to be solved");
  }

  // Anchor and truncate.
  Instance working = instance;
  std::optional<MhrAnchor> mhr;
  std::optional<RegularAnchor> regular;
  if (instance.value_class == ValueClass::Mhr) {
    mhr = beta_mhr(instance);
    const ValueBounds bounds = mhr_bounds(mhr->beta, options.eps);
    working = truncate_values(instance, bounds);
    provenance["anchor"] = to_json(*mhr);
    provenance["truncation"] = bounds_json(bounds);
  } else if (instance.value_class == ValueClass::Regular) {
    regular = alpha_regular(instance);
    const ValueBounds bounds = regular_bounds(regular->alpha, options.eps, instance.size());
    working = truncate_values(instance, bounds);
    provenance["anchor"] = to_json(*regular);
    provenance["truncation"] = bounds_json(bounds);
  }

  // Discretize, round masses, run the DP.
  const DiscretizationPlan plan =
      plan_discretization(working, options.eps, options.discretization);
  provenance["discretization"] = to_json(plan);
  RestrictedInstance ri = discretize_with_plan(working, plan, options.discretization.limits);
  provenance["discretization"]["k1"] = ri.k1();
  provenance["discretization"]["k2"] = ri.k2();
  provenance["discretization"]["value_grid_last_index"] = ri.value_grid_last_index;

  const Integer m = options.m_override ? Integer(std::to_string(*options.m_override))
                                       : rounding_base(ri.instance.size(), ri.price_ratio());
  ri.instance = vertical_round(ri.instance, m);
  DpOptions dp;
  dp.state_cap = options.state_cap;
  const Integer big_m = m * m * m;
  if (!big_m.fits_slong_p()) throw ResourceError("m^3 does not fit in 64 bits");
  dp.denominator = big_m.get_si();
  provenance["m"] = m.get_str();
  provenance["M"] = big_m.get_str();
  provenance["state_cap"] = options.state_cap;

  const DpResult result = run_dp(ri, ri.instance.tie_break, dp);
  report.layer_sizes = result.layer_sizes;
  report.predicted_revenue = result.predicted_revenue;
  json restricted = json::array();
  for (std::size_t j : result.price_indices) restricted.push_back(j);
  provenance["restricted_price_indices"] = restricted;

  // Lift back to the (truncated, then original) instance.
  PriceVector prices = back_map_prices(result.prices, ri.delta);
  prices = restrict_prices(prices, ClampRange{plan.u_min, plan.u_max});
  if (mhr) prices = lift_solution_mhr(prices, mhr->beta, options.eps);
  if (regular) prices = lift_solution_regular(prices, regular->alpha, options.eps, instance.size());
  report.prices = prices;
}

std::vector<Rational> support_union(const Instance& instance) {
  std::map<Rational, bool> seen;
  for (const auto& item : instance.items) {
    const auto* d = std::get_if<DiscreteDistribution>(&item);
    if (d == nullptr) throw InputError("brute force without --grid needs discrete items");
    for (std::size_t k = 0; k < d->size(); ++k) {
      if (d->masses()[k] > 0 && d->support()[k] > 0) seen[d->support()[k]] = true;
    }
  }
  std::vector<Rational> out;
  for (const auto& [v, unused] : seen) out.push_back(v);
  if (out.empty()) throw InputError("no positive support values to use as prices");
  return out;
}

}  // namespace

void evaluate(const Instance& instance, const PriceVector& prices, std::uint64_t samples,
              std::uint64_t seed, SolveReport& report) {
  if (instance.all_discrete()) {
    report.exact_revenue = exact_revenue(instance, prices, instance.tie_break);
  } else {
    report.estimate = monte_carlo_revenue(instance, prices, samples, seed);
  }
}

SolveReport solve(const Instance& input, const SolveOptions& options) {
  input.validate();
  Instance instance = input;
  if (options.tie_break) instance.tie_break = *options.tie_break;

  SolveReport report;
  report.solver = to_string(options.solver);
  json& provenance = report.provenance;
  provenance["tie_break"] = to_string(instance.tie_break);
  provenance["class"] = to_string(instance.value_class);
  provenance["eps"] = options.eps;
  provenance["seed"] = options.seed;
  provenance["samples"] = options.samples;
  provenance["n"] = instance.size();

  switch (options.solver) {
    case SolverKind::Brute: {
      const std::vector<Rational> grid = options.brute_grid ? *options.brute_grid
                                                            : support_union(instance);
      const BruteForceResult best = brute_force_optimum(instance, grid, instance.tie_break);
      report.prices = best.prices;
      report.predicted_revenue = best.revenue;
      json g = json::array();
      for (const auto& p : grid) g.push_back(rational_json(p));
      provenance["grid"] = g;
      provenance["vectors"] = best.vectors;
      break;
    }
    case SolverKind::Iid: {
      for (const auto& item : instance.items) {
        if (!(item == instance.items.front())) {
          throw InputError("the i.i.d. solver needs identical items");
        }
      }
      const IidResult iid = single_price_mhr(instance.items.front(), instance.size(), options.eps,
                                             options.iid);
      report.mode = to_string(iid.mode);
      provenance["iid"] = {{"eps_prime", iid.eps_prime},
                           {"log_n", iid.log_n},
                           {"log_threshold", iid.log_threshold},
                           {"alpha_n", iid.alpha_n},
                           {"cdf_queries", iid.cdf_queries}};
      if (iid.mode == IidMode::FastPath) {
        report.prices.assign(instance.size(), Price(rational_from_double(iid.price)));
      } else {
        run_dp_pipeline(instance, options, report);
      }
      break;
    }
    case SolverKind::Dp:
      run_dp_pipeline(instance, options, report);
      break;
  }
  evaluate(instance, report.prices, options.samples, options.seed, report);
  return report;
}

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Dp: return "dp";
    case SolverKind::Brute: return "brute";
    case SolverKind::Iid: return "iid";
  }
  return "dp";
}

SolverKind parse_solver(const std::string& text) {
  if (text == "dp") return SolverKind::Dp;
  if (text == "brute") return SolverKind::Brute;
  if (text == "iid") return SolverKind::Iid;
  throw InputError("solver must be dp, brute or iid");
}

}  // namespace unidemand
