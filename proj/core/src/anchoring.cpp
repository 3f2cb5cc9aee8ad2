#include "unidemand/anchoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "unidemand/errors.hpp"
#include "unidemand/random.hpp"
#include "unidemand/stats.hpp"

namespace unidemand {
namespace {

// x with x in [1 - eta, 1 + eta] * alpha_p of the item.
Rational approximate_quantile(const ValueDistribution& item, std::uint64_t p, double eta) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&item)) {
    return d->quantile(Rational(static_cast<unsigned long>(p)));
  }
  QuantileSearch search;
  search.f_precision = -1.0;  // stop on relative bracket width only
  search.rel_width = eta > 0 ? eta : 1e-15;
  search.max_iterations = 2000;
  return rational_from_double(oracle_quantile(std::get<CdfOracle>(item), static_cast<double>(p),
                                              search));
}

// Pr[max_{i in S} X_i >= z], accurate for small tails.
double prob_max_at_least(const Instance& instance, const std::vector<std::size_t>& subset,
                         double z) {
  double log_none = 0.0;
  for (std::size_t i : subset) {
    const double p = prob_at_least(instance.items[i], z);
    if (p >= 1.0) return 1.0;
    log_none += std::log1p(-p);
  }
  return -std::expm1(log_none);
}

std::vector<std::size_t> all_items(std::size_t n) {
  std::vector<std::size_t> s(n);
  std::iota(s.begin(), s.end(), std::size_t{0});
  return s;
}

}  // namespace

MhrAnchor beta_mhr(const Instance& instance, std::optional<double> eta_in) {
  instance.validate();
  const double eta = eta_in.value_or(instance.all_discrete() ? 0.0 : 0.01);
  if (!(eta >= 0.0) || !(eta < 0.5)) throw DomainError("eta must lie in [0, 1/2)");

  const std::size_t n = instance.size();
  std::size_t padded = 2;
  while (padded < n) padded *= 2;

  MhrAnchor anchor;
  anchor.eta = eta;
  anchor.padded_size = padded;

  std::vector<std::size_t> survivors = all_items(padded);
  std::size_t p = padded;
  int t = 0;
  while (survivors.size() > 1) {
    std::vector<std::pair<Rational, std::size_t>> scored;
    for (std::size_t i : survivors) {
      // Padding items are deterministic zeros.
      Rational x = i < n ? approximate_quantile(instance.items[i], p, eta) : Rational(0);
      scored.emplace_back(std::move(x), i);
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    scored.resize(scored.size() / 2);
    MhrRound round;
    round.t = t;
    round.beta_t = scored.back().first;
    for (const auto& [x, i] : scored) round.survivors.push_back(i);
    survivors = round.survivors;
    anchor.rounds.push_back(std::move(round));
    p /= 2;
    ++t;
  }
  // Final round: the last survivor's alpha_2.
  const std::size_t last = survivors.front();
  MhrRound final_round;
  final_round.t = t;
  final_round.beta_t = last < n ? approximate_quantile(instance.items[last], 2, eta) : Rational(0);
  final_round.survivors = survivors;
  anchor.rounds.push_back(std::move(final_round));

  anchor.beta = anchor.rounds.front().beta_t;
  for (const auto& round : anchor.rounds) anchor.beta = std::max(anchor.beta, round.beta_t);
  return anchor;
}

RegularAnchor alpha_regular(const Instance& instance, const Rational& c1, const Rational& c2) {
  instance.validate();
  const std::size_t n = instance.size();
  if (n < 2) throw DomainError("regular anchoring needs at least two items");
  const Rational n3 = Rational(static_cast<long>(n * n * n));
  if (!(c1 > 0) || !(c1 < c2) || c2 > Rational(7, 8) || c2 > 1 - 1 / n3) {
    throw DomainError("anchoring constants need 0 < c1 < c2 <= 7/8 and c2 <= 1 - 1/n^3, got c1=" +
                      to_string(c1) + " c2=" + to_string(c2));
  }

  RegularAnchor anchor;
  anchor.c1 = c1;
  anchor.c2 = c2;
  Rational best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& item = instance.items[i];
    Rational a;
    Rational f;
    if (const auto* d = std::get_if<DiscreteDistribution>(&item)) {
      a = d->quantile(1 / (1 - c1));
      f = d->cdf(a);
    } else {
      const auto& oracle = std::get<CdfOracle>(item);
      const double lo = to_double(c1);
      const double hi = to_double(c2);
      QuantileSearch search;
      search.f_precision = std::min(1e-12, 0.25 * (hi - lo));
      double x = oracle_quantile(oracle, 1.0 / (1.0 - lo), search);
      double fx = oracle.cdf(x);
      if (fx > hi) {
        // Midpoint refinement for CDFs that jump past c2 near c1.
        x = oracle_quantile(oracle, 1.0 / (1.0 - 0.5 * (lo + hi)), search);
        fx = oracle.cdf(x);
      }
      a = rational_from_double(x);
      f = rational_from_double(fx);
      // Bisection lands within f_precision of c1; accept that slack.
      if (f < c1 && f >= c1 - Rational(1, 1000000000000L)) f = c1;
    }
    if (f < c1 || f > c2) {
      throw AnchoringError("item " + std::to_string(i) + " has no point with CDF in [" +
                           to_string(c1) + ", " + to_string(c2) + "]");
    }
    best = std::max(best, Rational(a * (1 - f)));
    anchor.anchor_points.push_back(a);
    anchor.anchor_cdf.push_back(f);
  }
  anchor.alpha = n3 / c1 * best;
  return anchor;
}

double beta_from_constant_approx(double beta_prime, double a) {
  if (!(beta_prime > 0)) throw DomainError("beta_prime must be positive");
  if (!(a >= 1)) throw DomainError("approximation factor a must be >= 1");
  return 2.0 * a / (1.0 - std::exp(-0.5)) * beta_prime;
}

bool AnchorReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const AnchorCheck& c) { return c.informational || c.pass; });
}

AnchorReport verify_mhr_anchor(const Instance& instance, const MhrAnchor& anchor, double eps,
                               std::uint64_t samples, std::uint64_t seed) {
  instance.validate();
  if (!(eps > 0) || !(eps < 0.25)) throw DomainError("eps must lie in (0, 1/4)");
  if (samples < 10000) throw DomainError("anchor verification needs at least 10^4 samples");

  const double beta = to_double(anchor.beta);
  const double log_inv = std::log(1.0 / eps);
  const double half = beta / 2.0;
  const double high = 2.0 * beta * log_inv;

  RunningStats reach;
  RunningStats tail;
  for (std::uint64_t s = 0; s < samples; ++s) {
    double max_value = 0.0;
    for (std::size_t i = 0; i < instance.size(); ++i) {
      max_value = std::max(max_value, sample(instance.items[i], keyed_uniform(seed, i, s)));
    }
    reach.add(max_value >= half ? 1.0 : 0.0);
    tail.add(max_value >= high ? max_value : 0.0);
  }

  AnchorReport report;
  const Estimate r = reach.estimate();
  AnchorCheck first;
  first.name = "Pr[max >= beta/2] >= 1 - 1/sqrt(e)";
  first.bound = 1.0 - std::exp(-0.5);
  first.estimate = r.mean;
  first.ci99 = r.ci99;
  first.pass = r.mean + r.ci99 >= first.bound;
  report.checks.push_back(first);

  const Estimate c = tail.estimate();
  AnchorCheck second;
  second.name = "Con[max >= 2 beta ln(1/eps)] <= 36 beta eps ln(1/eps)";
  second.bound = 36.0 * beta * eps * log_inv;
  second.estimate = c.mean;
  second.ci99 = c.ci99;
  second.pass = c.mean - c.ci99 <= second.bound;
  report.checks.push_back(second);
  return report;
}

AnchorReport verify_regular_anchor(const Instance& instance, const RegularAnchor& anchor,
                                   double eps, std::uint64_t samples, std::uint64_t /*seed*/) {
  instance.validate();
  if (!(eps > 0) || !(eps < 1)) throw DomainError("eps must lie in (0, 1)");
  if (samples < 10000) throw DomainError("anchor verification needs at least 10^4 samples");
  const std::size_t n = instance.size();
  const double n3 = static_cast<double>(n * n * n);
  const double alpha = to_double(anchor.alpha);
  AnchorReport report;

  // (a) per-item tails.
  for (std::size_t i = 0; i < n; ++i) {
    for (int ell : {1, 2, 4}) {
      AnchorCheck check;
      check.name = "Pr[X_" + std::to_string(i) + " >= " + std::to_string(ell) +
                   " alpha] <= 2/(" + std::to_string(ell) + " n^3)";
      check.bound = 2.0 / (ell * n3);
      if (const auto* d = std::get_if<DiscreteDistribution>(&instance.items[i])) {
        const Rational p = d->prob_at_least(ell * anchor.alpha);
        check.estimate = to_double(p);
        check.pass = p <= Rational(2) / (ell * Rational(static_cast<long>(n * n * n)));
      } else {
        check.estimate = prob_at_least(instance.items[i], ell * alpha);
        check.pass = check.estimate <= check.bound * (1.0 + 1e-12);
      }
      report.checks.push_back(check);
    }
  }

  // (b) alpha / n^3 against the best single-threshold revenue of the maximum.
  const std::vector<std::size_t> everyone = all_items(n);
  std::vector<double> grid;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = to_double(anchor.anchor_points[i]);
    grid.push_back(a);
    lo = std::min(lo, a);
    if (const auto* d = std::get_if<DiscreteDistribution>(&instance.items[i])) {
      for (const auto& v : d->support()) grid.push_back(to_double(v));
    }
  }
  hi = 4.0 * alpha;
  lo = std::max(lo / 100.0, 1e-300);
  if (hi > lo) {
    const int points = 400;
    const double ratio = std::pow(hi / lo, 1.0 / (points - 1));
    double z = lo;
    for (int k = 0; k < points; ++k, z *= ratio) grid.push_back(z);
  }
  double best = 0.0;
  for (double z : grid) {
    if (z > 0) best = std::max(best, z * prob_max_at_least(instance, everyone, z));
  }
  AnchorCheck ratio_check;
  ratio_check.name = "alpha/n^3 <= (1/c1) max_z z Pr[max >= z] (ratio reported)";
  ratio_check.bound = 1.0 / to_double(anchor.c1);
  ratio_check.estimate = best > 0 ? (alpha / n3) / best : std::numeric_limits<double>::infinity();
  ratio_check.pass = ratio_check.estimate <= ratio_check.bound * (1.0 + 1e-9);
  ratio_check.informational = true;
  report.checks.push_back(ratio_check);

  // (c) homogenization on sampled subsets and thresholds.
  const double t0 = 2.0 * static_cast<double>(n * n) * alpha / (eps * eps);
  const double low_scale = 2.0 * alpha / eps;
  std::vector<std::vector<std::size_t>> subsets;
  const std::size_t max_size = std::min<std::size_t>(n, 4);
  // Every subset of size <= 4 drawn from the first 8 items.
  const std::size_t pool = std::min<std::size_t>(n, 8);
  for (std::uint32_t mask = 1; mask < (1u << pool); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < pool; ++i) {
      if (mask & (1u << i)) s.push_back(i);
    }
    if (s.size() <= max_size) subsets.push_back(std::move(s));
  }
  double worst_gap = -std::numeric_limits<double>::infinity();
  bool homogenization_ok = true;
  double worst_lhs = 0.0;
  double worst_rhs = 0.0;
  for (const auto& s : subsets) {
    for (double t : {t0, 2.0 * t0, 4.0 * t0}) {
      for (int pattern = 0; pattern < 4; ++pattern) {
        double lhs = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k) {
          // Patterns: all equal to t, 2t, 4t, and a staggered mix.
          const double ti = pattern < 3 ? t * std::pow(2.0, pattern) : t * std::pow(2.0, k % 3);
          lhs += ti * prob_at_least(instance.items[s[k]], ti);
        }
        const double rhs = (t - low_scale) * prob_max_at_least(instance, s, t) +
                           7.0 * eps * (low_scale * prob_max_at_least(instance, s, low_scale)) /
                               static_cast<double>(n);
        const double gap = lhs - rhs;
        if (gap > worst_gap) {
          worst_gap = gap;
          worst_lhs = lhs;
          worst_rhs = rhs;
        }
        if (lhs > rhs * (1.0 + 1e-9) + 1e-300) homogenization_ok = false;
      }
    }
  }
  AnchorCheck homogenization;
  homogenization.name = "homogenization: sum t_i Pr[X >= t_i] <= RHS (worst sampled case)";
  homogenization.bound = worst_rhs;
  homogenization.estimate = worst_lhs;
  homogenization.pass = homogenization_ok;
  report.checks.push_back(homogenization);
  return report;
}

}  // namespace unidemand
