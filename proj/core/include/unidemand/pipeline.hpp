#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "unidemand/discretization.hpp"
#include "unidemand/iid.hpp"
#include "unidemand/instance.hpp"
#include "unidemand/stats.hpp"

namespace unidemand {

enum class SolverKind { Dp, Brute, Iid };

struct SolveOptions {
  double eps = 0.25;
  std::optional<TieBreak> tie_break;  // overrides the instance's rule
  SolverKind solver = SolverKind::Dp;
  std::size_t state_cap = 5'000'000;
  std::optional<std::int64_t> m_override;  // m; the DP denominator becomes m^3
  std::uint64_t seed = 1;
  std::uint64_t samples = 100'000;  // Monte-Carlo evaluation of oracle instances
  DiscretizationOptions discretization;
  std::optional<std::vector<Rational>> brute_grid;  // defaults to the union of supports
  IidOptions iid;
};

struct SolveReport {
  std::string solver;
  std::string mode;  // "FastPath"/"FallBack" for the i.i.d. solver
  PriceVector prices;
  std::optional<Rational> predicted_revenue;
  std::optional<Rational> exact_revenue;
  std::optional<Estimate> estimate;
  std::vector<std::size_t> layer_sizes;
  nlohmann::json provenance;
};

// Untagged instances must be all-discrete; they skip anchoring and truncation.
// MHR: beta -> truncate -> discretize -> vertical round -> DP -> back-map,
// clamp, lift. Regular: the same with alpha. The result is evaluated exactly
// for discrete instances and by Monte Carlo otherwise.
SolveReport solve(const Instance& instance, const SolveOptions& options);

// Exact when every item is discrete, Monte Carlo otherwise.
void evaluate(const Instance& instance, const PriceVector& prices, std::uint64_t samples,
              std::uint64_t seed, SolveReport& report);

std::string to_string(SolverKind kind);
SolverKind parse_solver(const std::string& text);

}  // namespace unidemand
