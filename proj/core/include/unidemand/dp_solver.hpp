#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "unidemand/discretization.hpp"
#include "unidemand/instance.hpp"
#include "unidemand/rational.hpp"

namespace unidemand {

// Joint law of (winning value index, winning price index) in units of 1/M.
// Stored sparsely: nonzero cells only, ordered by row-major cell index
// i1 * k2 + i2.
class WinningDistribution {
 public:
  struct Cell {
    std::uint32_t index = 0;
    std::int64_t units = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
  };

  WinningDistribution() = default;
  WinningDistribution(std::size_t k1, std::size_t k2, std::int64_t denominator,
                      std::vector<Cell> cells);

  std::size_t k1() const { return k1_; }
  std::size_t k2() const { return k2_; }
  std::int64_t denominator() const { return denominator_; }
  const std::vector<Cell>& cells() const { return cells_; }

  std::int64_t units(std::size_t i1, std::size_t i2) const;
  std::vector<std::int64_t> dense() const;
  std::int64_t total() const;

  friend bool operator==(const WinningDistribution& a, const WinningDistribution& b) {
    return a.cells_ == b.cells_ && a.k1_ == b.k1_ && a.k2_ == b.k2_;
  }
  // Lexicographic order of the dense row-major unit matrices.
  friend bool operator<(const WinningDistribution& a, const WinningDistribution& b);

  std::size_t hash() const;

 private:
  std::size_t k1_ = 0;
  std::size_t k2_ = 0;
  std::int64_t denominator_ = 1;
  std::vector<Cell> cells_;
};

// Dense exact matrix, row-major k1 x k2.
struct RationalMatrix {
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  std::vector<Rational> cells;
  const Rational& at(std::size_t i1, std::size_t i2) const { return cells[i1 * k2 + i2]; }
};

// Point mass M at the lexicographically smallest cell minimising v - p.
WinningDistribution base_distribution(const std::vector<Rational>& values,
                                      const std::vector<Rational>& prices,
                                      std::int64_t denominator);

// One exact update of the winning distribution by a new item priced at
// prices[j]. HighestIndex: the new item takes ties. LowestIndex: the current
// winner keeps them. Straightforward dense evaluation; the solver uses an
// equivalent sparse engine.
RationalMatrix transition(const WinningDistribution& wd, const DiscreteDistribution& item,
                          std::size_t j, const std::vector<Rational>& values,
                          const std::vector<Rational>& prices, TieBreak tie_break);

// Floors every cell to a multiple of 1/M and rounds up the first l cells (in
// row-major order, among those with a nonzero remainder) where l restores the
// total to M.
WinningDistribution canonical_round(const RationalMatrix& matrix, std::int64_t denominator);

// Sum of p * mass over cells with v >= p.
Rational revenue_of(const WinningDistribution& wd, const std::vector<Rational>& values,
                    const std::vector<Rational>& prices);

// Precomputed gap ranks and integer item masses for fast transitions on one
// restricted instance.
class DpContext {
 public:
  DpContext(const RestrictedInstance& ri, TieBreak tie_break, std::int64_t denominator);

  WinningDistribution base() const;
  // transition followed by canonical_round, in integer arithmetic.
  WinningDistribution step(const WinningDistribution& wd, std::size_t item, std::size_t j) const;
  Rational revenue(const WinningDistribution& wd) const;

  std::int64_t denominator() const { return denominator_; }
  std::size_t items() const { return item_units_.size(); }
  // Whether the most recent step had to round (never true in exact mode).
  bool last_step_rounded() const { return last_step_rounded_; }

 private:
  struct ItemUnits {
    std::int64_t denominator = 1;
    std::vector<std::pair<std::uint32_t, std::int64_t>> masses;  // (value index, units)
  };

  const RestrictedInstance* ri_;
  TieBreak tie_break_;
  std::int64_t denominator_;
  std::vector<std::uint32_t> rank_;  // per cell; equal gaps share a rank
  std::vector<bool> sells_;          // per cell: v >= p
  std::vector<ItemUnits> item_units_;
  mutable bool last_step_rounded_ = false;
};

struct DpOptions {
  // M; defaults to m^3 with m = ceil(n r).
  std::optional<std::int64_t> denominator;
  // Pick M so that no rounding ever happens (product of item mass denominators).
  bool exact = false;
  std::size_t state_cap = 5'000'000;
};

struct DpResult {
  std::vector<std::size_t> price_indices;
  PriceVector prices;
  Rational predicted_revenue;
  std::vector<std::size_t> layer_sizes;  // layers 0..n
  std::int64_t denominator = 0;
  WinningDistribution final_state;
};

std::int64_t default_denominator(const RestrictedInstance& ri);
// Product of the items' mass denominators; ResourceError past 2^62.
std::int64_t exact_denominator(const RestrictedInstance& ri);

DpResult run_dp(const RestrictedInstance& ri, TieBreak tie_break, const DpOptions& options = {});

}  // namespace unidemand
