#include <random>

#include <gtest/gtest.h>

#include "support/enumerate.hpp"
#include "unidemand/errors.hpp"
#include "unidemand/oracle.hpp"

using namespace unidemand;

namespace {

Instance counterexample() {
  Instance inst;
  inst.items.emplace_back(DiscreteDistribution({1, 5}, {ratio(1, 2), ratio(1, 2)}));
  inst.items.emplace_back(DiscreteDistribution({3, ratio(7, 2)}, {ratio(1, 2), ratio(1, 2)}));
  return inst;
}

PriceVector random_prices(std::mt19937_64& rng, std::size_t n, bool allow_infinite) {
  PriceVector p;
  for (std::size_t i = 0; i < n; ++i) {
    if (allow_infinite && rng() % 7 == 0) {
      p.push_back(Price::infinity());
    } else {
      p.emplace_back(ratio(1 + static_cast<long>(rng() % 16), 4));
    }
  }
  return p;
}

Instance scaled(const Instance& inst, const Rational& s) {
  Instance out = inst;
  out.items.clear();
  for (const auto& it : inst.items) {
    const auto& d = std::get<DiscreteDistribution>(it);
    std::vector<Rational> support;
    for (const auto& v : d.support()) support.push_back(v * s);
    out.items.emplace_back(DiscreteDistribution(support, d.masses()));
  }
  return out;
}

}  // namespace

TEST(ExactRevenue, Counterexample) {
  const Instance inst = counterexample();
  const auto t = TieBreak::LowestIndex;
  EXPECT_EQ(exact_revenue(inst, make_prices({ratio(9, 2), 3}), t), ratio(15, 4));
  EXPECT_EQ(exact_revenue(inst, make_prices({5, ratio(7, 2)}), t), ratio(27, 8));
  EXPECT_EQ(exact_revenue(inst, make_prices({5, 3}), t), ratio(7, 2));
}

TEST(ExactRevenue, RejectsBadInput) {
  EXPECT_THROW(exact_revenue(counterexample(), make_prices({1}), TieBreak::LowestIndex),
               DomainError);
  Instance inst;
  inst.items.emplace_back(CdfOracle::exponential(1));
  EXPECT_THROW(exact_revenue(inst, make_prices({1}), TieBreak::LowestIndex),
               UnsupportedInputError);
}

TEST(BruteForce, Examples) {
  const Instance inst = counterexample();
  const auto a = brute_force_optimum(inst, {1, 3, ratio(7, 2), 5}, TieBreak::LowestIndex);
  EXPECT_EQ(a.prices, make_prices({5, 3}));
  EXPECT_EQ(a.revenue, ratio(7, 2));
  EXPECT_EQ(a.vectors, 16u);
  const auto b = brute_force_optimum(inst, {3, ratio(9, 2)}, TieBreak::LowestIndex);
  EXPECT_EQ(b.prices, make_prices({ratio(9, 2), 3}));
  EXPECT_EQ(b.revenue, ratio(15, 4));

  Instance single;
  single.items.emplace_back(DiscreteDistribution::point_mass(10));
  const auto c = brute_force_optimum(single, {5, 10}, TieBreak::LowestIndex);
  EXPECT_EQ(c.prices, make_prices({10}));
  EXPECT_EQ(c.revenue, 10);

  EXPECT_THROW(brute_force_optimum(inst, {1, 2, 3}, TieBreak::LowestIndex, 8), ResourceError);
}

TEST(BruteForce, AgreesWithPlainEnumeration) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 80; ++trial) {
    const Instance inst = test_support::random_instance(rng, 1 + rng() % 3, 1 + rng() % 3);
    const auto set = test_support::random_price_set(rng, 1 + rng() % 4);
    for (TieBreak tie : {TieBreak::LowestIndex, TieBreak::HighestIndex}) {
      const auto r = brute_force_optimum(inst, set, tie);
      EXPECT_EQ(r.revenue, test_support::enumerate_optimum(inst, set, tie));
      EXPECT_EQ(test_support::enumerate_revenue(inst, r.prices, tie), r.revenue);
    }
  }
}

// The sequential evaluator against full k1^n enumeration.
TEST(ExactRevenue, SequentialMatchesEnumeration) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 3;
    const Instance inst = test_support::random_instance(rng, n, 1 + rng() % 3);
    const PriceVector p = random_prices(rng, n, true);
    for (TieBreak tie : {TieBreak::LowestIndex, TieBreak::HighestIndex}) {
      EXPECT_EQ(exact_revenue(inst, p, tie), test_support::enumerate_revenue(inst, p, tie));
      const ExactWinning w = exact_winning(inst, p, tie);
      Rational total = w.nobody;
      for (const auto& e : w.entries) total += e.probability;
      EXPECT_EQ(total, 1);
    }
  }
}

TEST(ExactRevenue, ScaleCovariance) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 3;
    const Instance inst = test_support::random_instance(rng, n, 1 + rng() % 3);
    const PriceVector p = random_prices(rng, n, false);
    for (const Rational& s : {Rational(2), ratio(1, 3), ratio(7, 5)}) {
      PriceVector q;
      for (const auto& x : p) q.emplace_back(x.value() * s);
      for (TieBreak tie : {TieBreak::LowestIndex, TieBreak::HighestIndex}) {
        EXPECT_EQ(exact_revenue(scaled(inst, s), q, tie), s * exact_revenue(inst, p, tie));
      }
    }
  }
}

TEST(ExactRevenue, OverpricedItemChangesNothing) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 3;
    const Instance inst = test_support::random_instance(rng, n, 1 + rng() % 3);
    const PriceVector p = random_prices(rng, n, false);
    Instance more = inst;
    more.items.emplace_back(DiscreteDistribution({1, 2}, {ratio(1, 2), ratio(1, 2)}));
    PriceVector q = p;
    q.emplace_back(ratio(9, 4));
    for (TieBreak tie : {TieBreak::LowestIndex, TieBreak::HighestIndex}) {
      EXPECT_EQ(exact_revenue(more, q, tie), exact_revenue(inst, p, tie));
    }
  }
}

TEST(MonteCarlo, DegenerateCasesAreExact) {
  Instance inst = counterexample();
  const Estimate none = monte_carlo_revenue(inst, make_prices({6, 4}), 1000, 1);
  EXPECT_EQ(none.mean, 0.0);
  EXPECT_EQ(none.ci99, 0.0);
  Instance single;
  single.items.emplace_back(DiscreteDistribution::point_mass(3));
  EXPECT_EQ(monte_carlo_revenue(single, make_prices({ratio(5, 2)}), 1000, 9).mean, 2.5);
}

TEST(MonteCarlo, SameSeedSameEstimate) {
  const Instance inst = counterexample();
  const auto a = monte_carlo_revenue(inst, make_prices({ratio(9, 2), 3}), 5000, 77);
  const auto b = monte_carlo_revenue(inst, make_prices({ratio(9, 2), 3}), 5000, 77);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.ci99, b.ci99);
}

TEST(MonteCarlo, IntervalCalibration) {
  const Instance inst = counterexample();
  const PriceVector p = make_prices({ratio(9, 2), 3});
  const double exact = to_double(exact_revenue(inst, p, inst.tie_break));
  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const Estimate e = monte_carlo_revenue(inst, p, 2000, seed);
    if (std::abs(e.mean - exact) <= e.ci99) ++covered;
  }
  EXPECT_GE(covered, 990) << covered << " of 1000 intervals cover the exact revenue";
}

TEST(MonteCarlo, TiesFollowTheInstanceRule) {
  // Both items always have gap 0; only the tie rule decides who sells.
  Instance inst;
  inst.items.emplace_back(DiscreteDistribution::point_mass(2));
  inst.items.emplace_back(DiscreteDistribution::point_mass(3));
  const PriceVector p = make_prices({2, 3});
  inst.tie_break = TieBreak::LowestIndex;
  EXPECT_EQ(monte_carlo_revenue(inst, p, 100, 1).mean, 2.0);
  inst.tie_break = TieBreak::HighestIndex;
  EXPECT_EQ(monte_carlo_revenue(inst, p, 100, 1).mean, 3.0);
}
