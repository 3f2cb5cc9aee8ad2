#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unidemand/instance.hpp"
#include "unidemand/rational.hpp"

namespace unidemand {

// Caps on the sizes of the geometric grids (largest exponent admitted).
struct GridLimits {
  std::int64_t max_value_exponent = 10'000'000;
  std::int64_t max_prices = 5'000;
  // Oracle items occupy every value grid point.
  std::int64_t max_dense_values = 20'000;
};

// {(1 + eps^2 - eps) u_min / (1 - eps^2)^i : i = 0..floor(log_{1/(1-eps^2)}(u_max/u_min))},
// ascending. eps in (0, 1/2].
std::vector<Rational> price_grid(const Rational& u_min, const Rational& u_max, const Rational& eps,
                                 std::int64_t max_prices = GridLimits{}.max_prices);

// Formula count floor(log_{1/(1-eps^2)}(r)) + 1 in floating point, for grids
// far too large to build.
double price_grid_size(double r, double eps);

// Each p maps to (1 + eps^2 - eps) u_min / (1 - eps^2)^floor(log_{1/(1-eps^2)}(p/u_min)),
// which lies in [1 - eps, 1 + eps^2 - eps] * p.
PriceVector snap_prices(const PriceVector& prices, const Rational& u_min, const Rational& eps);

struct HorizontalGrid {
  Rational delta;
  Rational xi;  // delta^2 / (1 + delta - delta^2)
  Rational u_min;
  Rational u_max;
  std::int64_t last_index = 0;         // J; the grid is a_0..a_J
  std::vector<std::int64_t> indices;   // grid exponents kept in the output support
  std::vector<Rational> points;        // a_j for j in indices
};

// Largest delta admitted for a value ratio r: 1/(4 ceil(log2 r))^{4/3}
// (no constraint beyond delta < 1 when r < 2).
double horizontal_delta_bound(const Rational& r);

// Value grid a_j = (1 + delta)(1 + xi)^j u_min, j = 0..J. Value v moves to the
// a_j with u_min (1 + xi)^j <= v < u_min (1 + xi)^{j+1}, so a_j / v lies in
// [1 + delta - delta^2, 1 + delta]. `u_min`/`u_max` bound every item's
// positive-mass support. With `sparse` set, grid points that no item occupies
// are dropped from the common support (they would carry zero mass for every
// item); oracle items occupy every point.
Instance horizontal_discretize(const Instance& instance, const Rational& delta,
                               const Rational& u_min, const Rational& u_max,
                               HorizontalGrid* grid = nullptr, bool sparse = false,
                               const GridLimits& limits = {});

// p / ((1 + delta - delta^2)(1 + delta)) elementwise.
PriceVector back_map_prices(const PriceVector& prices, const Rational& delta);

// Rounds masses at s_2.. down to multiples of 1/m^3; s_1 takes the remainder.
Instance vertical_round(const Instance& instance, const Integer& m);
// m = ceil(n * r), the integer stand-in for rn.
Integer rounding_base(std::size_t n, const Rational& r);

enum class Schedule { Practical, Theorem };

struct DiscretizationOptions {
  Schedule schedule = Schedule::Practical;
  std::optional<Rational> delta;      // override
  std::optional<Rational> price_eps;  // override
  GridLimits limits;
};

// Everything needed to reproduce (or refuse) a discretization.
struct DiscretizationPlan {
  Schedule schedule = Schedule::Practical;
  double eps = 0.0;
  double eps_bound = 0.0;  // admissible eps: 1/(4 ceil(log2 r))^{1/6}
  Rational u_min;
  Rational u_max;
  Rational r;  // u_max / u_min
  Rational delta;
  Rational price_eps;
  Rational price_low;   // price grid spans [price_low, price_high]
  Rational price_high;
  double value_grid_points = 0.0;  // formula count J + 1
  double price_grid_points = 0.0;  // formula count
};

struct RestrictedInstance {
  Instance instance;                  // common support for every item
  std::vector<Rational> values;       // the common support
  std::vector<Rational> prices;       // ascending
  Rational delta;
  DiscretizationPlan plan;
  std::int64_t value_grid_last_index = 0;

  std::size_t k1() const { return values.size(); }
  std::size_t k2() const { return prices.size(); }
  Rational price_ratio() const { return prices.back() / prices.front(); }
};

// Schedules. Theorem: delta = (eps/8)^8 and eps' = (eps/8)^8 / 4, so the
// restricted-price loss 2 eps' equals half of delta. Practical: delta =
// 1/ceil(1/min(eps/8, half the horizontal bound)), eps' = eps/4.
DiscretizationPlan plan_discretization(const Instance& instance, double eps,
                                       const DiscretizationOptions& options = {});

// Builds the restricted instance for a plan: horizontal discretization over
// the instance's [u_min, u_max] (sparse common support) and the price grid
// over [(1 + delta) u_min, (1 + delta) u_max]. Throws ResourceError when the
// grids exceed the limits; the plan carries their formula sizes.
RestrictedInstance full_discretize(const Instance& instance, double eps,
                                   const DiscretizationOptions& options = {});
RestrictedInstance discretize_with_plan(const Instance& instance, const DiscretizationPlan& plan,
                                        const GridLimits& limits = {});

// Hand-built restricted instance from discrete items sharing `values`.
RestrictedInstance make_restricted(const Instance& instance, std::vector<Rational> prices);

std::string to_string(Schedule schedule);

}  // namespace unidemand
