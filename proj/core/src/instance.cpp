#include "unidemand/instance.hpp"

#include <algorithm>

#include "unidemand/errors.hpp"

namespace unidemand {

bool Instance::all_discrete() const {
  return std::all_of(items.begin(), items.end(),
                     [](const ValueDistribution& d) { return is_discrete(d); });
}

void Instance::validate() const {
  if (items.empty()) throw DomainError("instance has no items");
}

Price::Price(Rational value) : value_(std::move(value)) {
  if (value_ <= 0) throw DomainError("prices must be positive, got " + to_string(value_));
}

Price Price::infinity() {
  Price p;
  p.infinite_ = true;
  return p;
}

bool operator<(const Price& a, const Price& b) {
  if (a.infinite_) return false;
  if (b.infinite_) return true;
  return a.value_ < b.value_;
}

PriceVector make_prices(const std::vector<Rational>& values) {
  return PriceVector(values.begin(), values.end());
}

std::string to_string(TieBreak tie_break) {
  return tie_break == TieBreak::LowestIndex ? "lowest" : "highest";
}

std::string to_string(ValueClass value_class) {
  switch (value_class) {
    case ValueClass::Mhr: return "mhr";
    case ValueClass::Regular: return "regular";
    case ValueClass::Untagged: break;
  }
  return "untagged";
}

std::string to_string(const Price& price) {
  return price.is_infinite() ? "inf" : to_string(price.value());
}

TieBreak parse_tie_break(const std::string& text) {
  if (text == "lowest") return TieBreak::LowestIndex;
  if (text == "highest") return TieBreak::HighestIndex;
  throw InputError("tie_break must be \"lowest\" or \"highest\", got \"" + text + "\"");
}

}  // namespace unidemand
