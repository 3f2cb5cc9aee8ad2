#include "unidemand/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "unidemand/errors.hpp"

namespace unidemand {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

// ∫_a^b S(t) dt on a finite interval, or on [a, inf) when b is infinite.
template <typename F>
double integrate(F&& survival, double a, double b) {
  if (!(b > a)) return 0.0;
  if (std::isinf(b)) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(survival, a, kInf, 1e-13);
  }
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(survival, a, b, 10,
                                                                       1e-12);
}

}  // namespace

// ---------------------------------------------------------------------------
// DiscreteDistribution

DiscreteDistribution::DiscreteDistribution(std::vector<Rational> support,
                                           std::vector<Rational> masses)
    : support_(std::move(support)), masses_(std::move(masses)) {
  if (support_.empty()) throw DomainError("discrete distribution needs a nonempty support");
  if (support_.size() != masses_.size()) {
    throw DomainError("support and masses differ in length");
  }
  Rational total = 0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i] < 0) throw DomainError("support values must be nonnegative");
    if (i > 0 && !(support_[i - 1] < support_[i])) {
      throw DomainError("support must be strictly increasing");
    }
    if (masses_[i] < 0) throw DomainError("masses must be nonnegative");
    total += masses_[i];
  }
  if (total != 1) throw DomainError("masses sum to " + to_string(total) + ", not 1");

  cumulative_.reserve(masses_.size());
  Rational running = 0;
  for (const auto& m : masses_) {
    running += m;
    cumulative_.push_back(running.get_d());
  }
  cumulative_.back() = 1.0;
  first_positive_ = static_cast<std::size_t>(
      std::find_if(masses_.begin(), masses_.end(), [](const Rational& m) { return m > 0; }) -
      masses_.begin());
  last_positive_ = masses_.size() - 1 -
                   static_cast<std::size_t>(std::find_if(masses_.rbegin(), masses_.rend(),
                                                         [](const Rational& m) { return m > 0; }) -
                                            masses_.rbegin());
}

DiscreteDistribution DiscreteDistribution::point_mass(const Rational& value) {
  return DiscreteDistribution({value}, {Rational(1)});
}

Rational DiscreteDistribution::cdf(const Rational& x) const {
  Rational total = 0;
  for (std::size_t i = 0; i < support_.size() && support_[i] <= x; ++i) total += masses_[i];
  return total;
}

Rational DiscreteDistribution::prob_at_least(const Rational& x) const {
  Rational total = 0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i] >= x) total += masses_[i];
  }
  return total;
}

Rational DiscreteDistribution::quantile(const Rational& p) const {
  if (p < 1) throw DomainError("quantile index p must be >= 1");
  if (p == 1) return u_min();
  const Rational target = 1 - 1 / p;
  Rational running = 0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    running += masses_[i];
    if (running >= target && masses_[i] > 0) return support_[i];
  }
  return u_max();
}

const Rational& DiscreteDistribution::u_min() const { return support_[first_positive_]; }
const Rational& DiscreteDistribution::u_max() const { return support_[last_positive_]; }

Rational DiscreteDistribution::mean() const { return tail_contribution(Rational(0)); }

Rational DiscreteDistribution::tail_contribution(const Rational& x) const {
  Rational total = 0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i] >= x) total += support_[i] * masses_[i];
  }
  return total;
}

std::size_t DiscreteDistribution::sample_index(double u) const {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  std::size_t index = static_cast<std::size_t>(it - cumulative_.begin());
  if (index >= support_.size()) index = last_positive_;
  // Never land on a zero-mass point through binary64 rounding.
  while (masses_[index] == 0 && index < last_positive_) ++index;
  return index;
}

// ---------------------------------------------------------------------------
// CdfOracle

CdfOracle CdfOracle::exponential(double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw DomainError("exponential needs lambda > 0");
  return CdfOracle(Family::Exponential, lambda, 0.0);
}

CdfOracle CdfOracle::uniform(double a, double b) {
  if (!(a >= 0) || !(b > a) || !std::isfinite(b)) {
    throw DomainError("uniform needs 0 <= a < b");
  }
  return CdfOracle(Family::Uniform, a, b);
}

CdfOracle CdfOracle::truncated_normal(double mu, double sigma) {
  if (!(sigma > 0) || !std::isfinite(mu) || !(mu + 8.0 * sigma > 0)) {
    throw DomainError("truncated normal needs sigma > 0 and mu + 8 sigma > 0");
  }
  return CdfOracle(Family::TruncatedNormal, mu, sigma);
}

CdfOracle CdfOracle::power_tail(double alpha) {
  if (!(alpha > 1) || !std::isfinite(alpha)) {
    throw DomainError("power tail needs alpha > 1 (finite mean)");
  }
  return CdfOracle(Family::PowerTail, alpha, 0.0);
}

double CdfOracle::base_lower() const {
  switch (family_) {
    case Family::Uniform: return p1_;
    case Family::PowerTail: return 1.0;
    default: return 0.0;
  }
}

double CdfOracle::base_upper() const {
  switch (family_) {
    case Family::Uniform: return p2_;
    case Family::TruncatedNormal: return p1_ + 8.0 * p2_;
    default: return kInf;
  }
}

double CdfOracle::base_cdf(double x) const {
  if (x < base_lower()) return 0.0;
  if (x >= base_upper()) return 1.0;
  switch (family_) {
    case Family::Exponential: return -std::expm1(-p1_ * x);
    case Family::Uniform: return (x - p1_) / (p2_ - p1_);
    case Family::TruncatedNormal: {
      const double lo = normal_cdf(-p1_ / p2_);
      const double hi = normal_cdf(8.0);
      return std::clamp((normal_cdf((x - p1_) / p2_) - lo) / (hi - lo), 0.0, 1.0);
    }
    case Family::PowerTail: return -std::expm1(-p1_ * std::log(x));
  }
  return 0.0;
}

double CdfOracle::base_survival(double x) const {
  if (x < base_lower()) return 1.0;
  if (x >= base_upper()) return 0.0;
  switch (family_) {
    case Family::Exponential: return std::exp(-p1_ * x);
    case Family::Uniform: return (p2_ - x) / (p2_ - p1_);
    case Family::TruncatedNormal: {
      const double lo = normal_cdf(-p1_ / p2_);
      const double hi = normal_cdf(8.0);
      const double upper = 0.5 * std::erfc((x - p1_) / p2_ / std::sqrt(2.0)) - (1.0 - hi);
      return std::clamp(upper / (hi - lo), 0.0, 1.0);
    }
    case Family::PowerTail: return std::pow(x, -p1_);
  }
  return 0.0;
}

double CdfOracle::base_inverse(double u) const {
  switch (family_) {
    case Family::Exponential: return -std::log1p(-u) / p1_;
    case Family::Uniform: return p1_ + u * (p2_ - p1_);
    case Family::TruncatedNormal: {
      const double lo = normal_cdf(-p1_ / p2_);
      const double hi = normal_cdf(8.0);
      const double x = p1_ + p2_ * normal_quantile(lo + u * (hi - lo));
      return std::clamp(x, 0.0, base_upper());
    }
    case Family::PowerTail: return std::exp(-std::log1p(-u) / p1_);
  }
  return 0.0;
}

double CdfOracle::cdf(double x, double /*precision*/) const {
  if (!truncation_) return base_cdf(x);
  const Truncation& t = *truncation_;
  if (x < t.low_point) return 0.0;
  if (x >= t.high_cut) return 1.0;
  if (x < t.low_cut) return base_cdf(t.low_cut);
  return base_cdf(x);
}

double CdfOracle::prob_at_least(double x) const {
  if (!truncation_) return base_survival(x);  // continuous
  const Truncation& t = *truncation_;
  if (x <= t.low_point) return 1.0;
  if (x > t.high_cut) return 0.0;
  if (x <= t.low_cut) return base_survival(t.low_cut);
  return base_survival(x);
}

double CdfOracle::lower() const { return truncation_ ? truncation_->low_point : base_lower(); }

double CdfOracle::upper() const { return truncation_ ? truncation_->high_cut : base_upper(); }

double CdfOracle::anchor() const {
  double median = 0.0;
  switch (family_) {
    case Family::Exponential: median = std::log(2.0) / p1_; break;
    case Family::Uniform: median = 0.5 * (p1_ + p2_); break;
    case Family::TruncatedNormal: median = base_inverse(0.5); break;
    case Family::PowerTail: median = std::pow(2.0, 1.0 / p1_); break;
  }
  if (truncation_) median = std::clamp(median, truncation_->low_point, truncation_->high_cut);
  return median;
}

double CdfOracle::sample(double u) const {
  const double v = base_inverse(u);
  if (!truncation_) return v;
  if (v < truncation_->low_cut) return truncation_->low_point;
  if (v >= truncation_->high_cut) return truncation_->high_cut;
  return v;
}

CdfOracle CdfOracle::truncated(const Truncation& t) const {
  if (!(t.low_point <= t.low_cut) || !(t.low_cut < t.high_cut) || !(t.low_point >= 0)) {
    throw DomainError("truncation needs 0 <= low_point <= low_cut < high_cut");
  }
  if (truncation_) throw DomainError("oracle is already truncated");
  CdfOracle result = *this;
  result.truncation_ = t;
  return result;
}

CdfOracle CdfOracle::base() const { return CdfOracle(family_, p1_, p2_); }

std::string CdfOracle::describe() const {
  std::ostringstream out;
  switch (family_) {
    case Family::Exponential: out << "exponential(" << shortest_decimal(p1_) << ")"; break;
    case Family::Uniform:
      out << "uniform(" << shortest_decimal(p1_) << "," << shortest_decimal(p2_) << ")";
      break;
    case Family::TruncatedNormal:
      out << "truncated_normal(" << shortest_decimal(p1_) << "," << shortest_decimal(p2_) << ")";
      break;
    case Family::PowerTail: out << "power_tail(" << shortest_decimal(p1_) << ")"; break;
  }
  if (truncation_) {
    out << " truncated[" << shortest_decimal(truncation_->low_point) << ","
        << shortest_decimal(truncation_->high_cut) << "]";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Free operations

double oracle_quantile(const CdfOracle& oracle, double p, const QuantileSearch& search) {
  if (!(p >= 1)) throw DomainError("quantile index p must be >= 1");
  const double lower = oracle.lower();
  if (p == 1) return lower;
  const double target = 1.0 - 1.0 / p;
  if (oracle.cdf(lower) >= target) return lower;

  double lo = lower;
  double hi = std::max(oracle.anchor(), lower);
  int iterations = 0;
  if (oracle.cdf(hi) >= target) {
    // Walk down from the anchor towards the lower end of the support.
    while (true) {
      const double next = lower + 0.5 * (hi - lower);
      if (oracle.cdf(next) < target || next == hi) {
        lo = next;
        break;
      }
      hi = next;
      if (++iterations > search.max_iterations) {
        throw ConvergenceError("quantile bisection failed to bracket below the anchor");
      }
    }
  } else {
    lo = hi;
    double step = std::max(hi - lower, 1.0);
    while (oracle.cdf(hi) < target) {
      lo = hi;
      hi += step;
      step *= 2.0;
      if (++iterations > search.max_iterations || !std::isfinite(hi)) {
        throw ConvergenceError("quantile bisection failed to bracket above the anchor");
      }
    }
  }
  // Invariant: F(lo) < target <= F(hi).
  for (int i = 0; i < search.max_iterations; ++i) {
    if (oracle.cdf(hi) - target <= search.f_precision) return hi;
    if (search.rel_width > 0 && hi - lo <= search.rel_width * lo) return 0.5 * (lo + hi);
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) return hi;
    if (oracle.cdf(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("quantile bisection did not converge");
}

double quantile(const ValueDistribution& dist, double p, double precision) {
  if (!(p >= 1)) throw DomainError("quantile index p must be >= 1");
  if (const auto* d = std::get_if<DiscreteDistribution>(&dist)) {
    return d->quantile(rational_from_double(p)).get_d();
  }
  if (!(precision > 0)) throw DomainError("oracle quantiles need precision > 0");
  QuantileSearch search;
  search.f_precision = precision;
  return oracle_quantile(std::get<CdfOracle>(dist), p, search);
}

double tail_contribution(const ValueDistribution& dist, double x) {
  if (!(x >= 0)) throw DomainError("tail contribution needs x >= 0");
  if (const auto* d = std::get_if<DiscreteDistribution>(&dist)) {
    return d->tail_contribution(rational_from_double(x)).get_d();
  }
  const auto& oracle = std::get<CdfOracle>(dist);
  if (x > oracle.upper()) return 0.0;
  // Con[X >= x] = a Pr[X >= a] + ∫_a^∞ Pr[X > t] dt with a = max(x, lower).
  const double a = std::max(x, oracle.lower());
  // Pr[X > t] equals Pr[X >= t] almost everywhere, which is all the
  // integral sees.
  const auto survival = [&oracle](double t) { return oracle.prob_at_least(t); };
  double integral = 0.0;
  double start = a;
  std::vector<double> breaks;
  if (const auto& t = oracle.truncation()) breaks = {t->low_cut, t->high_cut};
  breaks.push_back(oracle.upper());
  for (double b : breaks) {
    if (b <= start) continue;
    integral += integrate(survival, start, b);
    start = b;
    if (std::isinf(b)) break;
  }
  return a * oracle.prob_at_least(a) + integral;
}

double revenue_curve(const CdfOracle& oracle, double q, double precision) {
  if (!(q > 0) || !(q <= 1)) throw DomainError("revenue curve needs q in (0, 1]");
  if (q == 1) return oracle.lower();
  return q * quantile(oracle, 1.0 / q, precision);
}

ShapeReport check_shape(const CdfOracle& oracle_in, int grid_size) {
  if (grid_size < 3) throw DomainError("check_shape needs grid_size >= 3");
  const CdfOracle oracle = oracle_in.base();
  const double lower = oracle.lower();
  double start = lower > 0 ? lower * (1.0 + 1e-4) : oracle.anchor() / 100.0;
  const double stop = quantile(oracle, 1000.0);
  ShapeReport report;
  report.grid_points = static_cast<std::size_t>(grid_size);
  if (!(stop > start)) {
    report.inconclusive = true;
    return report;
  }
  const double ratio = std::pow(stop / start, 1.0 / (grid_size - 1));
  std::vector<double> hazard;
  std::vector<double> virtual_value;
  double x = start;
  for (int k = 0; k < grid_size; ++k, x *= ratio) {
    const double point = (k == grid_size - 1) ? stop : x;
    const double h = 1e-5 * point;
    const double density = (oracle.cdf(point + h) - oracle.cdf(point - h)) / (2.0 * h);
    const double survival = 1.0 - oracle.cdf(point);
    if (!(density > 0) || !(survival > 0) || !std::isfinite(density)) {
      report.inconclusive = true;
      continue;
    }
    hazard.push_back(density / survival);
    virtual_value.push_back(point - survival / density);
  }
  const auto nondecreasing = [](const std::vector<double>& values) {
    for (std::size_t k = 1; k < values.size(); ++k) {
      const double tol = 1e-6 * std::max(1.0, std::abs(values[k - 1]));
      if (values[k] < values[k - 1] - tol) return false;
    }
    return true;
  };
  if (nondecreasing(hazard)) {
    report.shape = Shape::Mhr;
  } else if (nondecreasing(virtual_value)) {
    report.shape = Shape::RegularOnly;
  } else {
    report.shape = Shape::Neither;
  }
  return report;
}

std::string to_string(Shape shape) {
  switch (shape) {
    case Shape::Mhr: return "MHR";
    case Shape::RegularOnly: return "RegularOnly";
    case Shape::Neither: return "Neither";
  }
  return "Neither";
}

double u_min(const ValueDistribution& dist) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&dist)) return d->u_min().get_d();
  return std::get<CdfOracle>(dist).lower();
}

double u_max(const ValueDistribution& dist) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&dist)) return d->u_max().get_d();
  return std::get<CdfOracle>(dist).upper();
}

double prob_at_least(const ValueDistribution& dist, double x) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&dist)) {
    return d->prob_at_least(rational_from_double(x)).get_d();
  }
  return std::get<CdfOracle>(dist).prob_at_least(x);
}

double sample(const ValueDistribution& dist, double u) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&dist)) {
    return d->support()[d->sample_index(u)].get_d();
  }
  return std::get<CdfOracle>(dist).sample(u);
}

bool is_discrete(const ValueDistribution& dist) {
  return std::holds_alternative<DiscreteDistribution>(dist);
}

}  // namespace unidemand
