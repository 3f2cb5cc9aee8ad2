#include "unidemand/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "unidemand/errors.hpp"

namespace unidemand {
namespace {

constexpr std::int64_t kSnapCap = 100'000'000;

void check_price_eps(const Rational& eps) {
  if (!(eps > 0) || !(eps <= Rational(1, 2))) {
    throw DomainError("price grid eps must lie in (0, 1/2], got " + to_string(eps));
  }
}

// ceil(log2 r) for r >= 1.
std::int64_t ceil_log2(const Rational& r) {
  std::int64_t l = 0;
  Rational power = 1;
  while (power < r) {
    power *= 2;
    ++l;
  }
  return l;
}

Rational one_minus_delta_squared_factor(const Rational& delta) { return 1 + delta - delta * delta; }

void check_delta(const Rational& delta, const Rational& r) {
  if (!(delta > 0) || !(delta < 1)) {
    throw DomainError("delta must lie in (0, 1), got " + to_string(delta));
  }
  const std::int64_t l = ceil_log2(r);
  if (l == 0) return;
  // delta < 1/(4L)^{4/3}  <=>  delta^3 (4L)^4 < 1
  const Rational four_l(static_cast<long>(4 * l));
  if (!(delta * delta * delta * pow(four_l, 4) < 1)) {
    throw DomainError("delta = " + shortest_decimal(to_double(delta)) +
                      " is too large for value ratio r = " + shortest_decimal(to_double(r)) +
                      "; it must be below " + shortest_decimal(horizontal_delta_bound(r)));
  }
}

Rational positive_min(const ValueDistribution& item) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&item)) return d->u_min();
  return rational_from_double(std::get<CdfOracle>(item).lower());
}

Rational positive_max(const ValueDistribution& item) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&item)) return d->u_max();
  const double upper = std::get<CdfOracle>(item).upper();
  if (!std::isfinite(upper)) {
    throw DomainError("discretization needs bounded supports; truncate " +
                      std::get<CdfOracle>(item).describe() + " first");
  }
  return rational_from_double(upper);
}

}  // namespace

std::vector<Rational> price_grid(const Rational& u_min, const Rational& u_max, const Rational& eps,
                                 std::int64_t max_prices) {
  check_price_eps(eps);
  if (!(u_min > 0) || !(u_min <= u_max)) throw DomainError("price grid needs 0 < u_min <= u_max");
  const Rational ratio = 1 / (1 - eps * eps);
  const std::int64_t last = floor_log(ratio, u_max / u_min, max_prices - 1);
  std::vector<Rational> grid;
  grid.reserve(static_cast<std::size_t>(last + 1));
  Rational p = (1 + eps * eps - eps) * u_min;
  for (std::int64_t i = 0; i <= last; ++i) {
    grid.push_back(p);
    p *= ratio;
  }
  return grid;
}

double price_grid_size(double r, double eps) {
  return std::floor(std::log(r) / -std::log1p(-eps * eps)) + 1.0;
}

PriceVector snap_prices(const PriceVector& prices, const Rational& u_min, const Rational& eps) {
  check_price_eps(eps);
  const Rational ratio = 1 / (1 - eps * eps);
  const Rational base = (1 + eps * eps - eps) * u_min;
  PriceVector out;
  out.reserve(prices.size());
  for (const Price& p : prices) {
    if (p.is_infinite() || p.value() < u_min) {
      throw DomainError("cannot snap price " + to_string(p) + " below u_min " + to_string(u_min));
    }
    const std::int64_t e = floor_log(ratio, p.value() / u_min, kSnapCap);
    Rational snapped = base * pow(ratio, static_cast<std::uint64_t>(e));
    if (snapped < (1 - eps) * p.value() || snapped > (1 + eps * eps - eps) * p.value()) {
      throw std::logic_error("snapped price left [1-eps, 1+eps^2-eps] * p");
    }
    out.emplace_back(std::move(snapped));
  }
  return out;
}

double horizontal_delta_bound(const Rational& r) {
  const std::int64_t l = ceil_log2(r);
  if (l == 0) return 1.0;
  return std::pow(4.0 * static_cast<double>(l), -4.0 / 3.0);
}

Instance horizontal_discretize(const Instance& instance, const Rational& delta,
                               const Rational& u_min, const Rational& u_max, HorizontalGrid* grid,
                               bool sparse, const GridLimits& limits) {
  instance.validate();
  if (!(u_min > 0) || !(u_min <= u_max)) {
    throw DomainError("horizontal discretization needs 0 < u_min <= u_max");
  }
  const Rational r = u_max / u_min;
  check_delta(delta, r);
  const Rational xi = delta * delta / one_minus_delta_squared_factor(delta);
  const Rational step = 1 + xi;
  bool dense = !sparse;
  for (const auto& item : instance.items) {
    if (!std::holds_alternative<DiscreteDistribution>(item)) dense = true;
  }
  // A dense grid is refused on the estimated size, before any big powers.
  const std::int64_t last =
      floor_log(step, r, dense ? limits.max_dense_values - 1 : limits.max_value_exponent);

  // Per-item masses keyed by grid exponent.
  std::vector<std::map<std::int64_t, Rational>> item_masses(instance.size());
  std::map<std::int64_t, bool> occupied;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const auto& item = instance.items[i];
    if (const auto* d = std::get_if<DiscreteDistribution>(&item)) {
      for (std::size_t k = 0; k < d->size(); ++k) {
        if (d->masses()[k] == 0) continue;
        const Rational& v = d->support()[k];
        if (v < u_min || v > u_max) {
          throw DomainError("item " + std::to_string(i) + " has value " + to_string(v) +
                            " outside [u_min, u_max]");
        }
        const std::int64_t j = floor_log(step, v / u_min, limits.max_value_exponent);
        item_masses[i][j] += d->masses()[k];
        occupied[j] = true;
      }
    }
  }

  std::vector<std::int64_t> indices;
  if (dense) {
    if (last + 1 > limits.max_dense_values) {
      throw ResourceError("value grid has " + std::to_string(last + 1) + " points (cap " +
                          std::to_string(limits.max_dense_values) + ")");
    }
    for (std::int64_t j = 0; j <= last; ++j) indices.push_back(j);
  } else {
    for (const auto& [j, unused] : occupied) indices.push_back(j);
  }

  std::vector<Rational> points;
  points.reserve(indices.size());
  {
    Rational power = 1;
    std::int64_t at = 0;
    const Rational lead = (1 + delta) * u_min;
    for (std::int64_t j : indices) {
      // Multiply up incrementally for dense grids, jump for sparse ones.
      if (j - at <= 8) {
        while (at < j) {
          power *= step;
          ++at;
        }
      } else {
        power = pow(step, static_cast<std::uint64_t>(j));
        at = j;
      }
      points.push_back(lead * power);
    }
  }

  // Oracle masses: G_j = Pr[X < u_min (1 + xi)^j], telescoped so the masses
  // sum to one exactly whatever the CDF's rounding.
  const double log_step = std::log1p(to_double(xi));
  const double u_min_d = to_double(u_min);
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const auto* oracle = std::get_if<CdfOracle>(&instance.items[i]);
    if (oracle == nullptr) continue;
    double previous = 0.0;
    for (std::int64_t j = 0; j <= last; ++j) {
      double next = 1.0;
      if (j < last) {
        const double boundary = u_min_d * std::exp(static_cast<double>(j + 1) * log_step);
        next = std::clamp(1.0 - oracle->prob_at_least(boundary), previous, 1.0);
      }
      item_masses[i][j] = Rational(next) - Rational(previous);
      previous = next;
    }
  }

  Instance out;
  out.tie_break = instance.tie_break;
  out.value_class = instance.value_class;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    std::vector<Rational> masses;
    masses.reserve(indices.size());
    for (std::int64_t j : indices) {
      const auto it = item_masses[i].find(j);
      masses.push_back(it == item_masses[i].end() ? Rational(0) : it->second);
    }
    out.items.emplace_back(DiscreteDistribution(points, std::move(masses)));
  }

  if (grid != nullptr) {
    grid->delta = delta;
    grid->xi = xi;
    grid->u_min = u_min;
    grid->u_max = u_max;
    grid->last_index = last;
    grid->indices = std::move(indices);
    grid->points = std::move(points);
  }
  return out;
}

PriceVector back_map_prices(const PriceVector& prices, const Rational& delta) {
  const Rational factor = one_minus_delta_squared_factor(delta) * (1 + delta);
  PriceVector out;
  out.reserve(prices.size());
  for (const Price& p : prices) {
    out.push_back(p.is_infinite() ? p : Price(p.value() / factor));
  }
  return out;
}

Instance vertical_round(const Instance& instance, const Integer& m) {
  if (m < 1) throw DomainError("vertical rounding base must be >= 1");
  const Integer unit = m * m * m;
  Instance out = instance;
  for (auto& item : out.items) {
    const auto* d = std::get_if<DiscreteDistribution>(&item);
    if (d == nullptr) throw UnsupportedInputError("vertical rounding needs discrete items");
    std::vector<Rational> masses = d->masses();
    Rational rest = 0;
    for (std::size_t k = 1; k < masses.size(); ++k) {
      masses[k] = ratio(floor(masses[k] * unit), unit);
      rest += masses[k];
    }
    masses[0] = 1 - rest;
    item = DiscreteDistribution(d->support(), std::move(masses));
  }
  return out;
}

Integer rounding_base(std::size_t n, const Rational& r) {
  return ceil(Rational(static_cast<long>(n)) * r);
}

DiscretizationPlan plan_discretization(const Instance& instance, double eps,
                                       const DiscretizationOptions& options) {
  instance.validate();
  DiscretizationPlan plan;
  plan.schedule = options.schedule;
  plan.eps = eps;
  plan.u_min = positive_min(instance.items[0]);
  plan.u_max = positive_max(instance.items[0]);
  for (const auto& item : instance.items) {
    plan.u_min = std::min(plan.u_min, positive_min(item));
    plan.u_max = std::max(plan.u_max, positive_max(item));
  }
  if (!(plan.u_min > 0)) {
    throw DomainError("discretization needs values bounded away from zero (u_min = " +
                      to_string(plan.u_min) + "); truncate first");
  }
  plan.r = plan.u_max / plan.u_min;
  const std::int64_t l = ceil_log2(plan.r);
  plan.eps_bound = l == 0 ? 1.0 : std::pow(4.0 * static_cast<double>(l), -1.0 / 6.0);
  if (!(eps > 0) || !(eps < plan.eps_bound)) {
    throw DomainError("eps = " + shortest_decimal(eps) + " is outside (0, " +
                      shortest_decimal(plan.eps_bound) + ") for value ratio r = " +
                      shortest_decimal(to_double(plan.r)));
  }
  const Rational e = rational_from_double(eps);
  if (options.schedule == Schedule::Theorem) {
    plan.delta = pow(e / 8, 8);
    plan.price_eps = plan.delta / 4;
  } else {
    // delta = 1/k for the smallest integer k with 1/k <= min(eps/8, bound/2),
    // which keeps the grid's rationals short.
    const Rational target =
        std::min(Rational(e / 8), rational_from_double(horizontal_delta_bound(plan.r) / 2.0));
    plan.delta = Rational(Integer(1), ceil(1 / target));
    plan.price_eps = e / 4;
  }
  if (options.delta) plan.delta = *options.delta;
  if (options.price_eps) plan.price_eps = *options.price_eps;
  check_delta(plan.delta, plan.r);
  check_price_eps(plan.price_eps);

  plan.price_low = (1 + plan.delta) * plan.u_min;
  plan.price_high = (1 + plan.delta) * plan.u_max;
  const double d = to_double(plan.delta);
  const double xi = d * d / (1.0 + d - d * d);
  const double log_r = std::log(to_double(plan.r));
  plan.value_grid_points = std::floor(log_r / std::log1p(xi)) + 1.0;
  plan.price_grid_points = price_grid_size(to_double(plan.r), to_double(plan.price_eps));
  return plan;
}

RestrictedInstance discretize_with_plan(const Instance& instance, const DiscretizationPlan& plan,
                                        const GridLimits& limits) {
  if (plan.price_grid_points > static_cast<double>(limits.max_prices)) {
    throw ResourceError("price grid would have about " + shortest_decimal(plan.price_grid_points) +
                        " points (cap " + std::to_string(limits.max_prices) + ")");
  }
  RestrictedInstance ri;
  HorizontalGrid grid;
  ri.instance = horizontal_discretize(instance, plan.delta, plan.u_min, plan.u_max, &grid,
                                      /*sparse=*/true, limits);
  ri.values = grid.points;
  ri.value_grid_last_index = grid.last_index;
  ri.prices = price_grid(plan.price_low, plan.price_high, plan.price_eps, limits.max_prices);
  ri.delta = plan.delta;
  ri.plan = plan;
  return ri;
}

RestrictedInstance full_discretize(const Instance& instance, double eps,
                                   const DiscretizationOptions& options) {
  return discretize_with_plan(instance, plan_discretization(instance, eps, options),
                              options.limits);
}

RestrictedInstance make_restricted(const Instance& instance, std::vector<Rational> prices) {
  instance.validate();
  if (prices.empty()) throw DomainError("price set is empty");
  std::sort(prices.begin(), prices.end());
  prices.erase(std::unique(prices.begin(), prices.end()), prices.end());
  if (!(prices.front() > 0)) throw DomainError("prices must be positive");

  std::map<Rational, bool> union_support;
  for (const auto& item : instance.items) {
    const auto* d = std::get_if<DiscreteDistribution>(&item);
    if (d == nullptr) throw UnsupportedInputError("restricted instances need discrete items");
    for (const auto& v : d->support()) union_support[v] = true;
  }
  RestrictedInstance ri;
  for (const auto& [v, unused] : union_support) ri.values.push_back(v);
  ri.instance.tie_break = instance.tie_break;
  ri.instance.value_class = instance.value_class;
  for (const auto& item : instance.items) {
    const auto& d = std::get<DiscreteDistribution>(item);
    std::vector<Rational> masses(ri.values.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
      const auto at = std::lower_bound(ri.values.begin(), ri.values.end(), d.support()[k]);
      masses[static_cast<std::size_t>(at - ri.values.begin())] = d.masses()[k];
    }
    ri.instance.items.emplace_back(DiscreteDistribution(ri.values, std::move(masses)));
  }
  ri.prices = std::move(prices);
  ri.delta = 0;
  ri.plan.u_min = ri.values.front();
  ri.plan.u_max = ri.values.back();
  ri.plan.price_low = ri.prices.front();
  ri.plan.price_high = ri.prices.back();
  ri.plan.value_grid_points = static_cast<double>(ri.values.size());
  ri.plan.price_grid_points = static_cast<double>(ri.prices.size());
  return ri;
}

std::string to_string(Schedule schedule) {
  return schedule == Schedule::Theorem ? "theorem" : "practical";
}

}  // namespace unidemand
