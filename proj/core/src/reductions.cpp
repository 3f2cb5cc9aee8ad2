#include "unidemand/reductions.hpp"

#include <cmath>
#include <map>

#include "unidemand/errors.hpp"

namespace unidemand {
namespace {

Rational log_inverse(double eps) { return rational_from_double(std::log(1.0 / eps)); }

Rational power_of_n(std::size_t n, unsigned k) {
  return pow(Rational(static_cast<long>(n)), k);
}

DiscreteDistribution couple(const DiscreteDistribution& d, const ValueBounds& b) {
  std::map<Rational, Rational> merged;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const Rational& v = d.support()[k];
    const Rational& target = v < b.low_cut ? b.low_point : (v >= b.high_cut ? b.high_cut : v);
    merged[target] += d.masses()[k];
  }
  std::vector<Rational> support;
  std::vector<Rational> masses;
  for (auto& [v, m] : merged) {
    support.push_back(v);
    masses.push_back(m);
  }
  return DiscreteDistribution(std::move(support), std::move(masses));
}

}  // namespace

ValueBounds mhr_bounds(const Rational& beta, double eps) {
  if (!(eps > 0) || !(eps < 0.25)) throw DomainError("eps must lie in (0, 1/4)");
  if (!(beta > 0)) throw DomainError("beta must be positive");
  const Rational e = rational_from_double(eps);
  return {e * beta, e * beta / 2, 2 * log_inverse(eps) * beta};
}

ValueBounds regular_bounds(const Rational& alpha, double eps, std::size_t n) {
  if (!(eps > 0) || !(eps < 1)) throw DomainError("eps must lie in (0, 1)");
  if (!(alpha > 0)) throw DomainError("alpha must be positive");
  if (n < 2) throw DomainError("regular truncation needs n >= 2");
  const Rational e = rational_from_double(eps);
  const Rational n4 = power_of_n(n, 4);
  return {e * alpha / (2 * n4), e * alpha / (4 * n4), 4 * n4 * alpha / (e * e * e)};
}

Instance truncate_values(const Instance& instance, const ValueBounds& bounds) {
  Instance out = instance;
  Truncation t{to_double(bounds.low_cut), to_double(bounds.low_point), to_double(bounds.high_cut)};
  for (auto& item : out.items) {
    if (auto* d = std::get_if<DiscreteDistribution>(&item)) {
      item = couple(*d, bounds);
    } else {
      item = std::get<CdfOracle>(item).truncated(t);
    }
  }
  return out;
}

Instance truncate_values_mhr(const Instance& instance, const Rational& beta, double eps) {
  return truncate_values(instance, mhr_bounds(beta, eps));
}

Instance truncate_values_regular(const Instance& instance, const Rational& alpha, double eps) {
  return truncate_values(instance, regular_bounds(alpha, eps, instance.size()));
}

PriceVector restrict_prices(const PriceVector& prices, const PriceRestriction& mode) {
  PriceVector out;
  out.reserve(prices.size());
  for (const Price& p : prices) {
    if (const auto* c = std::get_if<ClampRange>(&mode)) {
      if (!(c->lo <= c->hi)) throw DomainError("ClampRange needs lo <= hi");
      if (p.is_infinite() || p.value() > c->hi) {
        out.emplace_back(c->hi);
      } else if (p.value() < c->lo) {
        out.emplace_back(c->lo);
      } else {
        out.push_back(p);
      }
    } else if (const auto* r = std::get_if<RaiseLow>(&mode)) {
      out.push_back(!p.is_infinite() && p.value() < r->a ? Price(r->a) : p);
    } else if (const auto* h = std::get_if<CapHigh>(&mode)) {
      out.push_back(p.is_infinite() || p.value() > h->h ? Price(h->h) : p);
    } else {
      const auto& f = std::get<ReplaceInfinite>(mode);
      out.push_back(p.is_infinite() ? Price(f.pmax) : p);
    }
  }
  return out;
}

PriceVector lift_solution_mhr(const PriceVector& prices, const Rational& beta, double eps) {
  const ValueBounds b = mhr_bounds(beta, eps);
  const PriceVector clamped = restrict_prices(prices, ClampRange{b.low_point, b.high_cut});
  return restrict_prices(clamped, RaiseLow{b.low_cut});
}

PriceVector lift_solution_regular(const PriceVector& prices, const Rational& alpha, double eps,
                                  std::size_t n) {
  if (!(eps > 0) || !(eps < 1)) throw DomainError("eps must lie in (0, 1)");
  const Rational e = rational_from_double(eps);
  const Rational lo = e * alpha / power_of_n(n, 4);
  const Rational hi = 2 * power_of_n(n, 2) * alpha / (e * e);
  return restrict_prices(prices, ClampRange{lo, hi});
}

}  // namespace unidemand
