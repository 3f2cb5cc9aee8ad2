#include <string>

#include <gtest/gtest.h>

#include "unidemand/errors.hpp"
#include "unidemand/instance_json.hpp"

using namespace unidemand;

TEST(InstanceJson, DecimalsConvertFromTheirDigits) {
  // 0.1 and 1e-1 are the same rational, so this support is not increasing.
  EXPECT_THROW(load_instance(R"({"items": [
      {"kind": "discrete", "support": [0.1, 0.2, 1e-1], "masses": [0.3, 0.7, 0]}]})"),
               InputError);
}

TEST(InstanceJson, ExactMassesAndDefaults) {
  const Instance inst = load_instance(R"({"items": [
      {"kind": "discrete", "support": [0.1, 2.5], "masses": [0.3, "7/10"]}]})");
  ASSERT_EQ(inst.size(), 1u);
  EXPECT_EQ(inst.tie_break, TieBreak::LowestIndex);
  EXPECT_EQ(inst.value_class, ValueClass::Untagged);
  const auto& d = std::get<DiscreteDistribution>(inst.items[0]);
  EXPECT_EQ(d.support()[0], ratio(1, 10));
  EXPECT_EQ(d.support()[1], ratio(5, 2));
  EXPECT_EQ(d.masses()[0], ratio(3, 10));
}

TEST(InstanceJson, ParsesEveryFamily) {
  const Instance inst = load_instance(R"({"tie_break": "highest", "class": "mhr", "items": [
      {"kind": "exponential", "lambda": 2},
      {"kind": "uniform", "a": 0, "b": 1.5},
      {"kind": "truncated_normal", "mu": 1, "sigma": 0.5},
      {"kind": "power_tail", "alpha": 2}]})");
  EXPECT_EQ(inst.tie_break, TieBreak::HighestIndex);
  EXPECT_EQ(inst.value_class, ValueClass::Mhr);
  EXPECT_EQ(std::get<CdfOracle>(inst.items[0]), CdfOracle::exponential(2));
  EXPECT_EQ(std::get<CdfOracle>(inst.items[1]), CdfOracle::uniform(0, 1.5));
  EXPECT_EQ(std::get<CdfOracle>(inst.items[2]), CdfOracle::truncated_normal(1, 0.5));
  EXPECT_EQ(std::get<CdfOracle>(inst.items[3]), CdfOracle::power_tail(2));
}

TEST(InstanceJson, MalformedJsonReportsLineAndColumn) {
  try {
    load_instance("{\n  \"items\": [,]\n}");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2, column 13"), std::string::npos) << e.what();
  }
}

TEST(InstanceJson, RejectsUnknownFamiliesAndBadFields) {
  EXPECT_THROW(load_instance(R"({"items": [{"kind": "cauchy"}]})"), InputError);
  EXPECT_THROW(load_instance(R"({"items": []})"), InputError);
  EXPECT_THROW(load_instance(R"({"items": [{"kind": "exponential"}]})"), InputError);
  EXPECT_THROW(load_instance(R"({"tie_break": "random", "items": [{"kind": "exponential",
      "lambda": 1}]})"),
               InputError);
  EXPECT_THROW(load_instance(R"({"items": [{"kind": "discrete", "support": [1, 2],
      "masses": ["1/2", "1/3"]}]})"),
               InputError);
}

TEST(InstanceJson, RoundTrip) {
  const std::string text = R"({"tie_break": "highest", "class": "regular", "items": [
      {"kind": "discrete", "support": ["1/3", 2], "masses": ["1/7", "6/7"]},
      {"kind": "power_tail", "alpha": 2.5}]})";
  const Instance a = load_instance(text);
  const Instance b = instance_from_json(parse_json_exact(instance_to_json(a).dump()));
  EXPECT_EQ(a.tie_break, b.tie_break);
  EXPECT_EQ(a.value_class, b.value_class);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.items[i], b.items[i]);
}

TEST(InstanceJson, RationalFields) {
  EXPECT_EQ(json_rational(parse_json_exact("\"22/7\""), "x"), ratio(22, 7));
  EXPECT_EQ(json_rational(parse_json_exact("1.25e1"), "x"), ratio(25, 2));
  EXPECT_EQ(json_rational(parse_json_exact("3"), "x"), 3);
  EXPECT_THROW(json_rational(parse_json_exact("\"abc\""), "x"), InputError);
  EXPECT_THROW(json_rational(parse_json_exact("true"), "x"), InputError);
}
