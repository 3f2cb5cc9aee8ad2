#include "unidemand/rational.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "unidemand/errors.hpp"

namespace unidemand {
namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

Integer parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) {
    throw InputError("malformed rational '" + std::string(whole) + "'");
  }
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) {
    throw InputError("malformed rational '" + std::string(whole) + "'");
  }
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!is_digit(text[i])) {
      throw InputError("malformed rational '" + std::string(whole) + "'");
    }
  }
  std::string digits(text.substr(start));
  Integer value(digits, 10);
  return text[0] == '-' ? Integer(-value) : value;
}

Integer pow10(unsigned long exponent) {
  Integer result;
  mpz_ui_pow_ui(result.get_mpz_t(), 10, exponent);
  return result;
}

Rational parse_decimal(std::string_view text, std::string_view whole) {
  bool negative = false;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string mantissa;
  std::size_t fraction_digits = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (is_digit(c)) {
      mantissa.push_back(c);
      seen_digit = true;
      if (seen_point) ++fraction_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) {
    throw InputError("malformed rational '" + std::string(whole) + "'");
  }
  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') {
      throw InputError("malformed rational '" + std::string(whole) + "'");
    }
    const std::string_view exp_text = text.substr(pos + 1);
    const Integer e = parse_integer(exp_text, whole);
    if (!e.fits_slong_p() || abs(e) > 100000) {
      throw InputError("exponent out of range in '" + std::string(whole) + "'");
    }
    exponent = e.get_si();
  }
  Rational value{Integer(mantissa, 10)};
  const long scale = exponent - static_cast<long>(fraction_digits);
  if (scale > 0) {
    value *= Rational(pow10(static_cast<unsigned long>(scale)));
  } else if (scale < 0) {
    value /= Rational(pow10(static_cast<unsigned long>(-scale)));
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw InputError("empty rational");
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Integer num = parse_integer(text.substr(0, slash), text);
    const Integer den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    Rational value(num, den);
    value.canonicalize();
    return value;
  }
  return parse_decimal(text, text);
}

std::string shortest_decimal(double x) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), x);
  return std::string(buffer, result.ptr);
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite value has no rational form");
  return parse_rational(shortest_decimal(x));
}

std::string to_string(const Rational& value) { return value.get_str(); }

Integer floor(const Rational& value) {
  Integer result;
  mpz_fdiv_q(result.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return result;
}

Integer ceil(const Rational& value) {
  Integer result;
  mpz_cdiv_q(result.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return result;
}

Rational pow(const Rational& base, std::uint64_t exponent) {
  if (exponent > std::numeric_limits<unsigned long>::max()) {
    throw ResourceError("exponent too large for exact power");
  }
  Integer num;
  Integer den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  // Powers of coprime parts stay coprime.
  return Rational(num, den);
}

std::int64_t floor_log(const Rational& base, const Rational& bound,
                       std::int64_t cap) {
  if (base <= 1) throw DomainError("floor_log needs base > 1");
  if (bound < 1) throw DomainError("floor_log needs bound >= 1");
  // Double estimate, then exact correction by at most a few steps.
  const double estimate =
      std::log(bound.get_d()) / std::log1p(Rational(base - 1).get_d());
  if (!std::isfinite(estimate) || estimate > static_cast<double>(cap) + 2.0) {
    throw ResourceError("geometric grid would need about " +
                        shortest_decimal(std::floor(estimate) + 1) + " points (cap " +
                        std::to_string(cap + 1) + ")");
  }
  std::int64_t k = std::max<std::int64_t>(0, static_cast<std::int64_t>(estimate) - 1);
  Rational power = pow(base, static_cast<std::uint64_t>(k));
  while (power > bound && k > 0) {
    power /= base;
    --k;
  }
  while (true) {
    Rational next = power * base;
    if (next > bound) break;
    power = std::move(next);
    ++k;
  }
  if (k > cap) {
    throw ResourceError("geometric grid needs " + std::to_string(k + 1) +
                        " points (cap " + std::to_string(cap + 1) + ")");
  }
  return k;
}

std::int64_t to_int64(const Integer& value) {
  if (!value.fits_slong_p()) {
    throw ResourceError("integer " + value.get_str() + " exceeds 64-bit range");
  }
  return value.get_si();
}

}  // namespace unidemand
