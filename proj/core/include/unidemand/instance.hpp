#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "unidemand/distributions.hpp"
#include "unidemand/rational.hpp"

namespace unidemand {

// Which item wins when two value-minus-price gaps are equal.
//   LowestIndex:  the earlier item keeps the tie.
//   HighestIndex: the later item takes the tie (the DP recurrence as written).
enum class TieBreak { LowestIndex, HighestIndex };

// Distribution class the caller vouches for; selects the anchoring pipeline.
enum class ValueClass { Untagged, Mhr, Regular };

struct Instance {
  std::vector<ValueDistribution> items;
  TieBreak tie_break = TieBreak::LowestIndex;
  ValueClass value_class = ValueClass::Untagged;

  std::size_t size() const { return items.size(); }
  bool all_discrete() const;
  // Throws DomainError when there are no items.
  void validate() const;
};

// A price is a positive rational or +inf (an item that is never bought).
class Price {
 public:
  Price() = default;
  Price(Rational value);  // NOLINT: implicit on purpose
  Price(long value) : Price(Rational(value)) {}
  static Price infinity();

  bool is_infinite() const { return infinite_; }
  // Undefined for infinite prices; callers check is_infinite() first.
  const Rational& value() const { return value_; }

  friend bool operator==(const Price& a, const Price& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend bool operator<(const Price& a, const Price& b);

 private:
  Rational value_ = 0;
  bool infinite_ = false;
};

using PriceVector = std::vector<Price>;

PriceVector make_prices(const std::vector<Rational>& values);

std::string to_string(TieBreak tie_break);
std::string to_string(ValueClass value_class);
// "p/q" for finite prices, "inf" otherwise.
std::string to_string(const Price& price);
TieBreak parse_tie_break(const std::string& text);

}  // namespace unidemand
