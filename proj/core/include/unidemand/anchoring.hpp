#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unidemand/instance.hpp"
#include "unidemand/rational.hpp"

namespace unidemand {

struct MhrRound {
  int t = 0;
  Rational beta_t;
  // Items still in play after this round (Q_{t+1}); indices >= n are the
  // zero-valued padding items.
  std::vector<std::size_t> survivors;
};

struct MhrAnchor {
  Rational beta;
  std::vector<MhrRound> rounds;  // t = 0 .. log2(padded size)
  double eta = 0.0;
  std::size_t padded_size = 0;
};

struct RegularAnchor {
  Rational alpha;
  Rational c1;
  Rational c2;
  std::vector<Rational> anchor_points;  // a_i, one per item
  std::vector<Rational> anchor_cdf;     // F_i(a_i)
};

// Tournament over quantiles: each round keeps the half of the surviving items
// with the largest alpha_{N/2^t}. `eta` is the relative slack allowed on oracle
// quantiles; by default 0 for all-discrete instances and 0.01 otherwise.
MhrAnchor beta_mhr(const Instance& instance, std::optional<double> eta = std::nullopt);

// alpha = (n^3/c1) * max_i a_i (1 - F_i(a_i)) where a_i is the smallest point
// with F_i(a_i) >= c1, required to also satisfy F_i(a_i) <= c2.
RegularAnchor alpha_regular(const Instance& instance, const Rational& c1 = Rational(1, 2),
                            const Rational& c2 = Rational(3, 4));

// c * beta_prime with c = 2a / (1 - 1/sqrt(e)).
double beta_from_constant_approx(double beta_prime, double a);

struct AnchorCheck {
  std::string name;
  double bound = 0.0;
  double estimate = 0.0;
  double ci99 = 0.0;
  bool pass = false;
  // Reported but not part of the overall verdict.
  bool informational = false;
};

struct AnchorReport {
  std::vector<AnchorCheck> checks;
  bool all_pass() const;
};

// Monte-Carlo check of Pr[max >= beta/2] >= 1 - 1/sqrt(e) and
// Con[max >= 2 beta ln(1/eps)] <= 36 beta eps ln(1/eps), with the 99% interval
// counted in the instance's favour.
AnchorReport verify_mhr_anchor(const Instance& instance, const MhrAnchor& anchor, double eps,
                               std::uint64_t samples, std::uint64_t seed);

// Per-item tails Pr[X_i >= l alpha] <= 2/(l n^3) for l in {1,2,4}, the
// informational ratio alpha/n^3 / max_z z Pr[max >= z] against 1/c1, and the
// homogenization inequality on sampled subsets and thresholds. Every item kind
// shipped has a closed-form CDF, so these are evaluated without sampling.
AnchorReport verify_regular_anchor(const Instance& instance, const RegularAnchor& anchor,
                                   double eps, std::uint64_t samples, std::uint64_t seed);

}  // namespace unidemand
