#pragma once

#include <cstdint>
#include <vector>

#include "unidemand/instance.hpp"
#include "unidemand/rational.hpp"
#include "unidemand/stats.hpp"

namespace unidemand {

// Exact law of the winner's (value, price) after all items, plus the mass on
// which no item has been considered yet (only nonzero for empty instances or
// all-infinite prices).
struct ExactWinning {
  struct Entry {
    Rational value;
    Rational price;
    Rational probability;
  };
  std::vector<Entry> entries;  // sorted by (value, price)
  Rational nobody;
};

// Sequential exact update over each item's own (value, price) pairs; items
// priced at +inf never win. Discrete items only.
ExactWinning exact_winning(const Instance& instance, const PriceVector& prices, TieBreak tie_break);

// Expected payment: the buyer takes the item with the largest v - p, if
// that gap is >= 0, with ties settled by `tie_break`.
Rational exact_revenue(const Instance& instance, const PriceVector& prices, TieBreak tie_break);
Rational revenue_of(const ExactWinning& winning);

struct BruteForceResult {
  PriceVector prices;
  Rational revenue;
  std::uint64_t vectors = 0;
};

// Every vector in price_set^n; the lexicographically smallest maximiser wins.
BruteForceResult brute_force_optimum(const Instance& instance, std::vector<Rational> price_set,
                                     TieBreak tie_break, std::uint64_t cap = 10'000'000);

// Inverse-CDF sampling with keyed uniforms (seed, item, sample index). Ties
// between discrete items are resolved on exact gaps.
Estimate monte_carlo_revenue(const Instance& instance, const PriceVector& prices,
                             std::uint64_t samples, std::uint64_t seed);

}  // namespace unidemand
