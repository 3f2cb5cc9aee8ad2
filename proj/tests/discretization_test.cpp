#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "support/enumerate.hpp"
#include "unidemand/discretization.hpp"
#include "unidemand/errors.hpp"

using namespace unidemand;

namespace {

Instance counterexample() {
  Instance inst;
  inst.items.emplace_back(DiscreteDistribution({1, 5}, {ratio(1, 2), ratio(1, 2)}));
  inst.items.emplace_back(DiscreteDistribution({3, ratio(7, 2)}, {ratio(1, 2), ratio(1, 2)}));
  return inst;
}

}  // namespace

TEST(PriceGrid, Examples) {
  EXPECT_EQ(price_grid(1, 2, ratio(1, 2)),
            (std::vector<Rational>{ratio(3, 4), 1, ratio(4, 3)}));
  EXPECT_EQ(price_grid(1, 1, ratio(1, 5)), (std::vector<Rational>{ratio(21, 25)}));
  EXPECT_THROW(price_grid(1, 2, ratio(3, 5)), DomainError);
}

TEST(PriceGrid, ExactGeometricSequence) {
  const Rational eps = ratio(1, 7);
  const auto g = price_grid(ratio(2, 3), 40, eps);
  ASSERT_GT(g.size(), 10u);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_EQ(g[i] / g[i - 1], 1 / (1 - eps * eps));
  EXPECT_LE(g.back(), (1 + eps * eps - eps) * 40 / (1 - eps * eps));
  EXPECT_NEAR(price_grid_size(60, 1.0 / 7), static_cast<double>(g.size()), 0.0);
}

TEST(SnapPrices, Examples) {
  const Rational eps = ratio(1, 2);
  EXPECT_EQ(snap_prices({Price(1)}, 1, eps), PriceVector{Price(ratio(3, 4))});
  EXPECT_EQ(snap_prices({Price(ratio(6, 5))}, 1, eps), PriceVector{Price(ratio(3, 4))});
  EXPECT_EQ(snap_prices({Price(2)}, 1, eps), PriceVector{Price(price_grid(1, 2, eps).back())});
}

TEST(SnapPrices, StaysInsideTheMultiplicativeWindow) {
  std::mt19937_64 rng(31);
  for (const Rational& eps : {ratio(1, 10), ratio(1, 4), ratio(2, 5)}) {
    for (int trial = 0; trial < 100; ++trial) {
      const Rational p = 1 + ratio(static_cast<long>(rng() % 10000), 97);
      const Price s = snap_prices({Price(p)}, 1, eps)[0];
      EXPECT_GE(s.value(), (1 - eps) * p);
      EXPECT_LE(s.value(), (1 + eps * eps - eps) * p);
    }
  }
}

TEST(Horizontal, PointMassAtUminMovesToFirstPoint) {
  Instance inst;
  inst.items.emplace_back(DiscreteDistribution::point_mass(2));
  HorizontalGrid grid;
  const Instance out = horizontal_discretize(inst, ratio(1, 10), 2, 2, &grid);
  EXPECT_EQ(grid.last_index, 0);
  const auto& d = std::get<DiscreteDistribution>(out.items[0]);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.support()[0], ratio(11, 5));
}

TEST(Horizontal, UniformGridCountAndMasses) {
  // xi = 1/10099 and floor(ln 2 / ln(1 + xi)) = 7000, computed independently.
  Instance inst;
  inst.items.emplace_back(CdfOracle::uniform(1, 2));
  HorizontalGrid grid;
  const Instance out = horizontal_discretize(inst, ratio(1, 100), 1, 2, &grid);
  EXPECT_EQ(grid.xi, ratio(1, 10099));
  EXPECT_EQ(grid.last_index, 7000);
  const auto& d = std::get<DiscreteDistribution>(out.items[0]);
  EXPECT_EQ(d.size(), 7001u);
  // Mass at a_j is the length of [(1 + xi)^j, (1 + xi)^{j+1}).
  EXPECT_NEAR(to_double(d.masses()[0]), 1.0 / 10099, 1e-12);
  EXPECT_NEAR(to_double(d.masses()[100]), std::pow(1 + 1.0 / 10099, 100) / 10099, 1e-12);
  EXPECT_EQ(d.support()[0], ratio(101, 100));
}

TEST(Horizontal, ValuesMoveUpByAtMostOnePlusDelta) {
  std::mt19937_64 rng(32);
  const Rational delta = ratio(1, 20);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Rational> pool;
    for (int k = 4; k <= 8; ++k) pool.emplace_back(ratio(k, 4));
    const Instance inst = test_support::random_instance_on(rng, 1, 1, pool);
    const Rational v = std::get<DiscreteDistribution>(inst.items[0]).support()[0];
    const Instance out = horizontal_discretize(inst, delta, 1, 2);
    const auto& d = std::get<DiscreteDistribution>(out.items[0]);
    // The output keeps zero-mass grid points; find the one that got the mass.
    std::size_t k = 0;
    while (d.masses()[k] == 0) ++k;
    const Rational w = d.support()[k];
    EXPECT_GE(w / v, 1 + delta - delta * delta);
    EXPECT_LE(w / v, 1 + delta);
  }
}

TEST(Horizontal, DeltaBound) {
  EXPECT_NEAR(horizontal_delta_bound(4), 1.0 / 16, 1e-15);
  EXPECT_THROW(horizontal_discretize(counterexample(), ratio(1, 10), 1, 5), DomainError);
}

TEST(BackMap, Examples) {
  EXPECT_EQ(back_map_prices({Price(1)}, 0), PriceVector{Price(1)});
  const Rational d = ratio(1, 10);
  EXPECT_EQ(back_map_prices({Price((1 + d - d * d) * (1 + d))}, d), PriceVector{Price(1)});
  EXPECT_NEAR(to_double(back_map_prices({Price(2)}, d)[0].value()), 1.6681, 1e-4);
  EXPECT_EQ(back_map_prices({Price::infinity()}, d)[0], Price::infinity());
}

TEST(VerticalRound, Examples) {
  Instance inst;
  inst.items.emplace_back(DiscreteDistribution({1, 2}, {ratio(3, 10), ratio(7, 10)}));
  inst.items.emplace_back(DiscreteDistribution({1, 2}, {ratio(1, 8), ratio(7, 8)}));
  inst.items.emplace_back(DiscreteDistribution({1, 2}, {0, 1}));
  const Instance out = vertical_round(inst, 2);
  EXPECT_EQ(std::get<DiscreteDistribution>(out.items[0]).masses(),
            (std::vector<Rational>{ratio(3, 8), ratio(5, 8)}));
  EXPECT_EQ(std::get<DiscreteDistribution>(out.items[1]).masses(),
            (std::vector<Rational>{ratio(1, 8), ratio(7, 8)}));
  EXPECT_EQ(std::get<DiscreteDistribution>(out.items[2]).masses(),
            (std::vector<Rational>{0, 1}));
}

TEST(VerticalRound, TotalVariationBound) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k1 = 1 + rng() % 3;
    const Instance inst = test_support::random_instance(rng, 2, k1);
    const Integer m = 2 + static_cast<long>(rng() % 4);
    const Instance out = vertical_round(inst, m);
    const Rational unit = 1 / Rational(m * m * m);
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const auto& a = std::get<DiscreteDistribution>(inst.items[i]).masses();
      const auto& b = std::get<DiscreteDistribution>(out.items[i]).masses();
      Rational l1 = 0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        l1 += abs(a[k] - b[k]);
        if (k > 0) {
          EXPECT_EQ(Rational(b[k] / unit).get_den(), 1);
        }
      }
      EXPECT_LE(l1 / 2, Rational(static_cast<long>(k1)) * unit);
    }
  }
}

TEST(RoundingBase, CeilOfNR) {
  EXPECT_EQ(rounding_base(2, ratio(3, 2)), 3);
  EXPECT_EQ(rounding_base(3, ratio(5, 3)), 5);
  EXPECT_EQ(rounding_base(3, ratio(7, 4)), 6);
}

TEST(FullDiscretize, DegenerateRatio) {
  Instance inst;
  inst.items.emplace_back(DiscreteDistribution::point_mass(3));
  inst.items.emplace_back(DiscreteDistribution::point_mass(3));
  const RestrictedInstance ri = full_discretize(inst, 0.2);
  EXPECT_EQ(ri.k1(), 1u);
  EXPECT_EQ(ri.k2(), 1u);
}

TEST(FullDiscretize, CounterexampleNearTheBound) {
  const Instance inst = counterexample();
  const DiscretizationPlan plan = plan_discretization(inst, 0.6);
  EXPECT_NEAR(plan.eps_bound, 1.0 / std::pow(12.0, 1.0 / 6), 1e-12);
  const RestrictedInstance ri = discretize_with_plan(inst, plan);
  EXPECT_EQ(static_cast<double>(ri.k2()), plan.price_grid_points);
  EXPECT_EQ(ri.value_grid_last_index + 1, static_cast<std::int64_t>(plan.value_grid_points));
  EXPECT_EQ(ri.k1(), 4u);  // sparse support: one point per distinct value
  EXPECT_EQ(ri.prices.front(), (1 + plan.price_eps * plan.price_eps - plan.price_eps) *
                                   (1 + plan.delta) * plan.u_min);
  EXPECT_THROW(plan_discretization(inst, 0.7), DomainError);
}

TEST(FullDiscretize, TheoremScheduleRecordsFormulaSizes) {
  DiscretizationOptions options;
  options.schedule = Schedule::Theorem;
  const DiscretizationPlan plan = plan_discretization(counterexample(), 0.25, options);
  EXPECT_EQ(plan.delta, pow(ratio(1, 32), 8));
  EXPECT_GT(plan.price_grid_points, 1e20);
  EXPECT_THROW(full_discretize(counterexample(), 0.25, options), ResourceError);
}

TEST(MakeRestricted, BuildsCommonSupport) {
  const RestrictedInstance ri = make_restricted(counterexample(), {ratio(9, 2), 3, 3});
  EXPECT_EQ(ri.values, (std::vector<Rational>{1, 3, ratio(7, 2), 5}));
  EXPECT_EQ(ri.prices, (std::vector<Rational>{3, ratio(9, 2)}));
  EXPECT_EQ(ri.price_ratio(), ratio(3, 2));
  EXPECT_EQ(std::get<DiscreteDistribution>(ri.instance.items[1]).masses(),
            (std::vector<Rational>{0, ratio(1, 2), ratio(1, 2), 0}));
}
