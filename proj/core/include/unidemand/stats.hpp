#pragma once

#include <cmath>
#include <cstdint>

namespace unidemand {

// z-value of a two-sided 99% normal interval.
inline constexpr double kZ99 = 2.5758293035489004;

struct Estimate {
  double mean = 0.0;
  double ci99 = 0.0;  // half-width
  std::uint64_t samples = 0;
};

// Welford accumulator; observations must be added in a fixed order for
// reproducible output.
class RunningStats {
 public:
  void add(double x) {
    ++count_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(count_);
    m2_ += d * (x - mean_);
  }

  Estimate estimate() const {
    Estimate e;
    e.samples = count_;
    e.mean = mean_;
    if (count_ > 1) {
      const double variance = m2_ / static_cast<double>(count_ - 1);
      e.ci99 = kZ99 * std::sqrt(variance / static_cast<double>(count_));
    }
    return e;
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace unidemand
