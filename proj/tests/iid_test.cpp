#include <cmath>

#include <gtest/gtest.h>

#include "unidemand/errors.hpp"
#include "unidemand/iid.hpp"

using namespace unidemand;

TEST(SinglePrice, UniformFastPath) {
  IidOptions opts;
  opts.force_fast_path = true;
  opts.eps_prime = 0.1;
  const IidResult r = single_price_mhr(CdfOracle::uniform(0, 1), 100, 0.5, opts);
  EXPECT_EQ(r.mode, IidMode::FastPath);
  EXPECT_NEAR(r.alpha_n, 0.99, 1e-9);
  EXPECT_NEAR(r.price, 0.8 * 0.99, 1e-9);
}

TEST(SinglePrice, ExponentialFastPath) {
  IidOptions opts;
  opts.force_fast_path = true;
  opts.eps_prime = 1.0 / 12;
  const IidResult r = single_price_mhr(CdfOracle::exponential(1), 1'000'000, 1.0, opts);
  EXPECT_NEAR(r.alpha_n, std::log(1e6), 1e-9);
  EXPECT_NEAR(r.price, (1 - 2.0 / 12) * std::log(1e6), 1e-9);
  EXPECT_GT(r.cdf_queries, 0);
}

TEST(SinglePrice, SmallMarketFallsBack) {
  const IidResult r = single_price_mhr(CdfOracle::exponential(1), 1000, 1.0);
  EXPECT_EQ(r.mode, IidMode::FallBack);
  EXPECT_NEAR(r.eps_prime, 1.0 / 12, 1e-15);
  EXPECT_NEAR(r.log_threshold, 12 * std::log(12.0), 1e-9);
  EXPECT_LT(r.log_n, r.log_threshold);
}

TEST(SinglePrice, Deterministic) {
  IidOptions opts;
  opts.force_fast_path = true;
  const IidResult a = single_price_mhr(CdfOracle::exponential(2), 5000, 0.6, opts);
  const IidResult b = single_price_mhr(CdfOracle::exponential(2), 5000, 0.6, opts);
  EXPECT_EQ(a.price, b.price);
  EXPECT_EQ(a.cdf_queries, b.cdf_queries);
}

TEST(SinglePrice, RejectsEpsOutOfRange) {
  EXPECT_THROW(single_price_mhr(CdfOracle::exponential(1), 100, 0.0), DomainError);
  EXPECT_THROW(single_price_mhr(CdfOracle::exponential(1), 100, 1.5), DomainError);
}
