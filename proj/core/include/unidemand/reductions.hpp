#pragma once

#include <cstddef>
#include <variant>

#include "unidemand/instance.hpp"
#include "unidemand/rational.hpp"

namespace unidemand {

// Value coupling: v < low_cut -> low_point, v >= high_cut -> high_cut,
// otherwise unchanged.
struct ValueBounds {
  Rational low_cut;
  Rational low_point;
  Rational high_cut;
};

// Irrational constants such as ln(1/eps) enter as the exact value of their
// shortest binary64 decimal; eps itself is taken from its shortest decimal.
ValueBounds mhr_bounds(const Rational& beta, double eps);
ValueBounds regular_bounds(const Rational& alpha, double eps, std::size_t n);

// Applies the coupling to every item. Discrete items are remapped exactly,
// merging masses that land on the same point; oracle items gain a truncation.
Instance truncate_values(const Instance& instance, const ValueBounds& bounds);

// [eps beta/2, 2 ln(1/eps) beta]; eps in (0, 1/4).
Instance truncate_values_mhr(const Instance& instance, const Rational& beta, double eps);
// [eps alpha/(4n^4), 4 n^4 alpha/eps^3]; eps in (0, 1), n >= 2.
Instance truncate_values_regular(const Instance& instance, const Rational& alpha, double eps);

struct ClampRange {
  Rational lo;
  Rational hi;
};
struct RaiseLow {
  Rational a;
};
struct CapHigh {
  Rational h;
};
struct ReplaceInfinite {
  Rational pmax;
};
using PriceRestriction = std::variant<ClampRange, RaiseLow, CapHigh, ReplaceInfinite>;

PriceVector restrict_prices(const PriceVector& prices, const PriceRestriction& mode);

// Clamp into [eps beta/2, 2 ln(1/eps) beta], then raise anything below eps beta.
PriceVector lift_solution_mhr(const PriceVector& prices, const Rational& beta, double eps);
// Clamp into [eps alpha/n^4, 2 n^2 alpha/eps^2], the price window on which the
// regular reduction loses only a small fraction of revenue.
PriceVector lift_solution_regular(const PriceVector& prices, const Rational& alpha, double eps,
                                  std::size_t n);

}  // namespace unidemand
