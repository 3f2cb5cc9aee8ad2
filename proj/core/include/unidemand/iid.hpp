#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "unidemand/distributions.hpp"

namespace unidemand {

enum class IidMode { FastPath, FallBack };

struct IidOptions {
  // Skip the n >= (1/eps')^{1/eps'} test; used to exercise the fast path.
  bool force_fast_path = false;
  // Replaces eps' = eps/12.
  std::optional<double> eps_prime;
};

struct IidResult {
  IidMode mode = IidMode::FallBack;
  double price = 0.0;    // (1 - 2 eps') p, FastPath only
  double alpha_n = 0.0;  // p, the located alpha_n
  double eps_prime = 0.0;
  // ln n and (1/eps') ln(1/eps'); FastPath iff the first is >= the second.
  double log_n = 0.0;
  double log_threshold = 0.0;
  int cdf_queries = 0;
};

// Single uniform price for n i.i.d. MHR items. On the fast path alpha_n is
// located by bisection between the anchor x* and x* times
// ceil(log2 n / log2(1/(1 - F(x*)))), refined to relative width 1e-12.
IidResult single_price_mhr(const ValueDistribution& dist, std::uint64_t n, double eps,
                           const IidOptions& options = {});

std::string to_string(IidMode mode);

}  // namespace unidemand
