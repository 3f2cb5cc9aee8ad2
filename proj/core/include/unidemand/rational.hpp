#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace unidemand {

// Arbitrary-precision rational. Probability masses, grid points and prices
// that must be compared or summed exactly live in this type.
using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p/q", integers, and decimals with an optional exponent
// ("0.125", "-3", "1.5e-2"). Decimals are converted exactly from their digits.
Rational parse_rational(std::string_view text);

// Exact value of the shortest decimal that round-trips to `x`, so 0.1 maps to
// 1/10 rather than to the binary64 neighbour of 1/10.
Rational rational_from_double(double x);

// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_string(const Rational& value);

// Shortest round-trip decimal rendering of a binary64 value.
std::string shortest_decimal(double x);

// num/den in lowest terms (mpq_class's two-argument constructor does not
// canonicalize).
inline Rational ratio(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& value) { return value.get_d(); }

Integer floor(const Rational& value);
Integer ceil(const Rational& value);

// Largest integer k >= 0 with base^k <= bound, for base > 1 and bound >= 1.
// Computed exactly; `cap` bounds the answer and ResourceError is thrown past it.
std::int64_t floor_log(const Rational& base, const Rational& bound,
                       std::int64_t cap);

// base^exponent for exponent >= 0.
Rational pow(const Rational& base, std::uint64_t exponent);

// Converts an Integer that is known to fit; throws ResourceError otherwise.
std::int64_t to_int64(const Integer& value);

}  // namespace unidemand
