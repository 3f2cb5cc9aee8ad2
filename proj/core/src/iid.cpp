#include "unidemand/iid.hpp"

#include <algorithm>
#include <cmath>

#include "unidemand/errors.hpp"

namespace unidemand {
namespace {

constexpr double kRelativeWidth = 1e-12;

double locate_alpha_n(const CdfOracle& oracle, std::uint64_t n, int& queries) {
  const double target = 1.0 - 1.0 / static_cast<double>(n);
  const auto F = [&](double x) {
    ++queries;
    return oracle.cdf(x);
  };
  const double lower = oracle.lower();
  if (n == 1 || F(lower) >= target) return lower;
  const double anchor = oracle.anchor();
  const double f_anchor = F(anchor);
  double lo = lower;
  double hi = anchor;
  if (f_anchor < target) {
    // alpha_{m^d} <= d alpha_m for MHR with m = 1/(1 - F(x*)).
    const double m = 1.0 / (1.0 - f_anchor);
    const double factor =
        std::max(2.0, std::ceil(std::log2(static_cast<double>(n)) / std::log2(m)));
    lo = anchor;
    hi = anchor * factor;
    // Guard for inputs that are not quite MHR.
    for (int k = 0; F(hi) < target; ++k) {
      if (k > 200) throw ConvergenceError("could not bracket alpha_n above the anchor");
      lo = hi;
      hi *= 2.0;
    }
  }
  // Invariant: F(lo) < target <= F(hi) (or lo is the lower end).
  for (int k = 0; k < 400 && hi - lo > kRelativeWidth * hi; ++k) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (F(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace

IidResult single_price_mhr(const ValueDistribution& dist, std::uint64_t n, double eps,
                           const IidOptions& options) {
  if (!(eps > 0) || !(eps <= 1)) throw DomainError("eps must lie in (0, 1]");
  if (n < 1) throw DomainError("n must be >= 1");
  IidResult result;
  result.eps_prime = options.eps_prime.value_or(eps / 12.0);
  if (!(result.eps_prime > 0) || !(result.eps_prime < 0.5)) {
    throw DomainError("eps' must lie in (0, 1/2)");
  }
  result.log_n = std::log(static_cast<double>(n));
  result.log_threshold = std::log(1.0 / result.eps_prime) / result.eps_prime;
  if (!options.force_fast_path && result.log_n < result.log_threshold) {
    result.mode = IidMode::FallBack;
    return result;
  }
  result.mode = IidMode::FastPath;
  if (const auto* d = std::get_if<DiscreteDistribution>(&dist)) {
    result.alpha_n = to_double(d->quantile(Rational(Integer(std::to_string(n)))));
  } else {
    result.alpha_n = locate_alpha_n(std::get<CdfOracle>(dist), n, result.cdf_queries);
  }
  result.price = (1.0 - 2.0 * result.eps_prime) * result.alpha_n;
  return result;
}

std::string to_string(IidMode mode) { return mode == IidMode::FastPath ? "FastPath" : "FallBack"; }

}  // namespace unidemand
