#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "unidemand/rational.hpp"

namespace unidemand {

// Finite-support value distribution with exact masses.
//
// The support is strictly increasing and nonnegative; the masses are
// nonnegative and sum to exactly one. Zero masses are allowed so that several
// items can share a common support list.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<Rational> support, std::vector<Rational> masses);

  static DiscreteDistribution point_mass(const Rational& value);

  const std::vector<Rational>& support() const { return support_; }
  const std::vector<Rational>& masses() const { return masses_; }
  std::size_t size() const { return support_.size(); }

  // Right-continuous CDF, Pr[X <= x].
  Rational cdf(const Rational& x) const;
  Rational prob_at_least(const Rational& x) const;

  // alpha_p = inf{x | F(x) >= 1 - 1/p}; alpha_1 = u_min. Throws DomainError for p < 1.
  Rational quantile(const Rational& p) const;

  // Smallest / largest support point carrying positive mass.
  const Rational& u_min() const;
  const Rational& u_max() const;

  Rational mean() const;
  // E[X * 1{X >= x}].
  Rational tail_contribution(const Rational& x) const;

  // Inverse-CDF draw: the support index selected by a uniform u in (0,1).
  std::size_t sample_index(double u) const;

  friend bool operator==(const DiscreteDistribution& a, const DiscreteDistribution& b) {
    return a.support_ == b.support_ && a.masses_ == b.masses_;
  }

 private:
  std::vector<Rational> support_;
  std::vector<Rational> masses_;
  std::vector<double> cumulative_;  // binary64 running sums, for sampling only
  std::size_t first_positive_ = 0;
  std::size_t last_positive_ = 0;
};

enum class Family { Exponential, Uniform, TruncatedNormal, PowerTail };

// Coupling applied on top of a parametric family: values below `low_cut` are
// moved to the single point `low_point`, values at or above `high_cut` are
// moved to `high_cut`, everything else is unchanged.
struct Truncation {
  double low_cut = 0.0;
  double low_point = 0.0;
  double high_cut = 0.0;

  friend bool operator==(const Truncation&, const Truncation&) = default;
};

// Parametric continuous distribution behind a CDF-query interface.
//
// Families: exponential(lambda), uniform(a, b), truncated normal (mu, sigma)
// restricted to [0, mu + 8 sigma], and the power tail F(x) = 1 - x^-alpha on
// [1, inf) with alpha > 1. Every oracle carries an anchoring point x* with
// F(x*) inside the declared bracket [anchor_c1, anchor_c2].
class CdfOracle {
 public:
  static CdfOracle exponential(double lambda);
  static CdfOracle uniform(double a, double b);
  static CdfOracle truncated_normal(double mu, double sigma);
  static CdfOracle power_tail(double alpha);

  Family family() const { return family_; }
  double param1() const { return p1_; }
  double param2() const { return p2_; }
  const std::optional<Truncation>& truncation() const { return truncation_; }

  // F(x) within `precision`; the closed forms used here are accurate to a few
  // ulps, so any precision >= 0 is honoured.
  double cdf(double x, double precision = 0.0) const;
  double prob_at_least(double x) const;

  double lower() const;
  double upper() const;  // +inf for unbounded families

  double anchor() const;
  static constexpr double anchor_c1 = 0.25;
  static constexpr double anchor_c2 = 0.75;

  // Inverse-CDF draw for u in (0,1), including the truncation coupling.
  double sample(double u) const;

  CdfOracle truncated(const Truncation& t) const;
  // The family without any truncation.
  CdfOracle base() const;

  std::string describe() const;

  friend bool operator==(const CdfOracle&, const CdfOracle&) = default;

 private:
  CdfOracle(Family family, double p1, double p2) : family_(family), p1_(p1), p2_(p2) {}

  double base_cdf(double x) const;
  // 1 - base_cdf(x) without cancellation in the upper tail.
  double base_survival(double x) const;
  double base_inverse(double u) const;
  double base_lower() const;
  double base_upper() const;

  Family family_;
  double p1_ = 0.0;
  double p2_ = 0.0;
  std::optional<Truncation> truncation_;
};

using ValueDistribution = std::variant<DiscreteDistribution, CdfOracle>;

inline constexpr double kDefaultPrecision = 1e-12;

// Bisection controls for oracle quantiles: stop once |F(x) - target| <=
// f_precision, or once the bracket's relative width drops below rel_width.
struct QuantileSearch {
  double f_precision = kDefaultPrecision;
  double rel_width = 0.0;
  int max_iterations = 400;
};

// alpha_p. For oracles the value is found by bisection starting from the
// anchor; a bracket that cannot be established raises ConvergenceError.
double quantile(const ValueDistribution& dist, double p,
                double precision = kDefaultPrecision);
double oracle_quantile(const CdfOracle& oracle, double p, const QuantileSearch& search);

// E[X * 1{X >= x}]; equals E[X] at x = 0 and is 0 beyond u_max.
double tail_contribution(const ValueDistribution& dist, double x);

// R_F(q) = q * F^{-1}(1 - q) for q in (0, 1].
double revenue_curve(const CdfOracle& oracle, double q,
                     double precision = kDefaultPrecision);

enum class Shape { Mhr, RegularOnly, Neither };

struct ShapeReport {
  Shape shape = Shape::Neither;
  bool inconclusive = false;
  std::size_t grid_points = 0;
};

// Advisory numeric classification from central differences of the CDF on a
// geometric grid up to alpha_1000. Discrete distributions are never classified.
ShapeReport check_shape(const CdfOracle& oracle, int grid_size);

std::string to_string(Shape shape);

double u_min(const ValueDistribution& dist);
double u_max(const ValueDistribution& dist);
double prob_at_least(const ValueDistribution& dist, double x);
double sample(const ValueDistribution& dist, double u);
bool is_discrete(const ValueDistribution& dist);

}  // namespace unidemand
