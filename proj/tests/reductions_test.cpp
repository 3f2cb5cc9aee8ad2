#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "support/enumerate.hpp"
#include "unidemand/errors.hpp"
#include "unidemand/oracle.hpp"
#include "unidemand/reductions.hpp"

using namespace unidemand;

namespace {

Instance items(std::vector<DiscreteDistribution> ds) {
  Instance inst;
  for (auto& d : ds) inst.items.emplace_back(std::move(d));
  return inst;
}

const DiscreteDistribution& item(const Instance& inst, std::size_t i) {
  return std::get<DiscreteDistribution>(inst.items[i]);
}

PriceVector random_prices(std::mt19937_64& rng, std::size_t n, int lo_quarters, int hi_quarters) {
  PriceVector p;
  for (std::size_t i = 0; i < n; ++i) {
    p.emplace_back(ratio(lo_quarters + static_cast<long>(rng() % (hi_quarters - lo_quarters + 1)),
                         4));
  }
  return p;
}

}  // namespace

TEST(TruncateMhr, Examples) {
  const Rational beta = 2;
  const double high = 2 * std::log(10.0) * 2;
  const Instance inside = truncate_values_mhr(
      items({DiscreteDistribution({1, 5}, {ratio(1, 2), ratio(1, 2)})}), beta, 0.1);
  EXPECT_EQ(item(inside, 0).support(), (std::vector<Rational>{1, 5}));

  const Instance big = truncate_values_mhr(items({DiscreteDistribution::point_mass(100)}), beta, 0.1);
  EXPECT_NEAR(to_double(item(big, 0).support()[0]), high, 1e-12);

  const Instance small =
      truncate_values_mhr(items({DiscreteDistribution::point_mass(ratio(1, 100))}), beta, 0.1);
  EXPECT_EQ(item(small, 0).support()[0], ratio(1, 10));

  EXPECT_THROW(truncate_values_mhr(inside, beta, 0.25), DomainError);
}

TEST(TruncateMhr, MergesMassesOnTheLowPoint) {
  // eps beta / 2 = 1/10 already carries mass; 1/20 moves onto it.
  const Instance inst = items({DiscreteDistribution({ratio(1, 20), ratio(1, 10), 1},
                                                    {ratio(1, 4), ratio(1, 4), ratio(1, 2)})});
  const Instance out = truncate_values_mhr(inst, 2, 0.1);
  EXPECT_EQ(item(out, 0).support(), (std::vector<Rational>{ratio(1, 10), 1}));
  EXPECT_EQ(item(out, 0).masses(), (std::vector<Rational>{ratio(1, 2), ratio(1, 2)}));
}

TEST(TruncateMhr, OracleGainsTruncation) {
  Instance inst;
  inst.items.emplace_back(CdfOracle::exponential(1));
  const Instance out = truncate_values_mhr(inst, 2, 0.1);
  const auto& t = std::get<CdfOracle>(out.items[0]).truncation();
  ASSERT_TRUE(t.has_value());
  EXPECT_NEAR(t->low_cut, 0.2, 1e-15);
  EXPECT_NEAR(t->low_point, 0.1, 1e-15);
  EXPECT_NEAR(t->high_cut, 4 * std::log(10.0), 1e-12);
}

TEST(TruncateRegular, Examples) {
  const auto two = [](DiscreteDistribution d) { return items({d, d}); };
  const Instance low = truncate_values_regular(
      two(DiscreteDistribution::point_mass(ratio(1, 100))), 4, 0.5);
  EXPECT_EQ(item(low, 0).support()[0], ratio(1, 32));
  const Instance high =
      truncate_values_regular(two(DiscreteDistribution::point_mass(1'000'000)), 4, 0.5);
  EXPECT_EQ(item(high, 1).support()[0], 2048);
  const Instance mid = truncate_values_regular(two(DiscreteDistribution::point_mass(1)), 4, 0.5);
  EXPECT_EQ(item(mid, 0).support()[0], 1);
}

TEST(RestrictPrices, Modes) {
  const PriceVector p = {Price(ratio(1, 2)), Price(3), Price::infinity()};
  EXPECT_EQ(restrict_prices(p, ClampRange{1, 2}), (PriceVector{Price(1), Price(2), Price(2)}));
  EXPECT_EQ(restrict_prices({Price(ratio(1, 2)), Price(3)}, RaiseLow{1}),
            (PriceVector{Price(1), Price(3)}));
  EXPECT_EQ(restrict_prices({Price(4), Price::infinity()}, ReplaceInfinite{4}),
            (PriceVector{Price(4), Price(4)}));
  EXPECT_EQ(restrict_prices({Price(4), Price::infinity()}, CapHigh{3}),
            (PriceVector{Price(3), Price(3)}));
}

TEST(LiftMhr, Examples) {
  EXPECT_EQ(lift_solution_mhr({Price(ratio(1, 20))}, 2, 0.1), PriceVector{Price(ratio(1, 5))});
  const PriceVector inside = {Price(1), Price(5)};
  EXPECT_EQ(lift_solution_mhr(inside, 2, 0.1), inside);
  const PriceVector big = lift_solution_mhr({Price(1000)}, 2, 0.1);
  EXPECT_NEAR(to_double(big[0].value()), 4 * std::log(10.0), 1e-12);
}

TEST(LiftRegular, ClampsIntoTheWindow) {
  // [eps alpha / n^4, 2 n^2 alpha / eps^2] = [1/8, 128] for alpha = 4, eps = 1/2, n = 2.
  const PriceVector out =
      lift_solution_regular({Price(ratio(1, 1000)), Price(7), Price(1000)}, 4, 0.5, 2);
  EXPECT_EQ(out, (PriceVector{Price(ratio(1, 8)), Price(7), Price(128)}));
}

// Clamping into [u_min, u_max] never loses revenue.
TEST(ReductionProperties, ClampIntoSupportRange) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const TieBreak tie = trial % 2 ? TieBreak::HighestIndex : TieBreak::LowestIndex;
    const Instance inst = test_support::random_instance(rng, 1 + rng() % 3, 1 + rng() % 3, tie);
    Rational lo = 100, hi = 0;
    for (const auto& it : inst.items) {
      lo = std::min(lo, std::get<DiscreteDistribution>(it).u_min());
      hi = std::max(hi, std::get<DiscreteDistribution>(it).u_max());
    }
    const PriceVector p = random_prices(rng, inst.size(), 1, 20);
    EXPECT_GE(exact_revenue(inst, restrict_prices(p, ClampRange{lo, hi}), tie),
              exact_revenue(inst, p, tie));
  }
}

// Raising prices below a to a costs at most a.
TEST(ReductionProperties, RaiseLowLosesAtMostA) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const TieBreak tie = trial % 2 ? TieBreak::HighestIndex : TieBreak::LowestIndex;
    const Instance inst = test_support::random_instance(rng, 1 + rng() % 3, 1 + rng() % 3, tie);
    const PriceVector p = random_prices(rng, inst.size(), 1, 16);
    const Rational a = ratio(1 + static_cast<long>(rng() % 12), 4);
    EXPECT_GE(exact_revenue(inst, restrict_prices(p, RaiseLow{a}), tie),
              exact_revenue(inst, p, tie) - a);
  }
}

// With every price at or above the low cut, moving low values down is invisible.
TEST(ReductionProperties, LowerTruncationIsInvisibleAbovePriceFloor) {
  std::mt19937_64 rng(23);
  const ValueBounds bounds = mhr_bounds(20, 0.1);  // low cut 2, low point 1
  EXPECT_EQ(bounds.low_cut, 2);
  EXPECT_EQ(bounds.low_point, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const TieBreak tie = trial % 2 ? TieBreak::HighestIndex : TieBreak::LowestIndex;
    const Instance inst = test_support::random_instance(rng, 1 + rng() % 3, 1 + rng() % 3, tie);
    const Instance moved = truncate_values(inst, ValueBounds{2, 1, 1000});
    const PriceVector p = random_prices(rng, inst.size(), 8, 16);
    EXPECT_EQ(exact_revenue(moved, p, tie), exact_revenue(inst, p, tie));
  }
}

TEST(ReductionProperties, CouplingsKeepUnitMass) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst = test_support::random_instance(rng, 2, 3);
    const Instance out = truncate_values(inst, ValueBounds{ratio(3, 2), 1, ratio(5, 2)});
    for (const auto& it : out.items) {
      Rational total = 0;
      for (const auto& m : std::get<DiscreteDistribution>(it).masses()) total += m;
      EXPECT_EQ(total, 1);
    }
  }
}
