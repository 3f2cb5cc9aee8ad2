#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = unidemand::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) {
  return (fs::path(UNIDEMAND_FIXTURE_DIR) / name).string();
}

std::string temp_file(const std::string& name, const std::string& text) {
  const fs::path path = fs::path(::testing::TempDir()) / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST(Cli, EvalCounterexample) {
  const Result r = run({"eval", fixture("counterexample.json"), "--prices", "4.5,3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["exact_revenue"], "15/4");
}

TEST(Cli, BruteCounterexample) {
  const Result r = run({"brute", fixture("counterexample.json"), "--grid", "1,3,3.5,5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["revenue"], "7/2");
  EXPECT_EQ(doc["prices"], nlohmann::json::array({"5", "3"}));
  EXPECT_EQ(doc["vectors"], 16);
}

TEST(Cli, SolveCounterexample) {
  const Result r = run({"solve", fixture("counterexample.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_TRUE(doc["exact_revenue"].is_string());
  EXPECT_GE(doc["exact_revenue_decimal"].get<double>(), 0.75 * 3.75);
  EXPECT_EQ(doc["prices"].size(), 2u);
  EXPECT_TRUE(doc.contains("layers"));
  EXPECT_TRUE(doc.contains("provenance"));
}

TEST(Cli, SolveWritesToOutFile) {
  const std::string path = (fs::path(::testing::TempDir()) / "report.json").string();
  const Result r = run({"solve", fixture("three_items.json"), "--solver", "brute", "--grid",
                        "1,2,3,4", "--out", path});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path);
  const auto doc = nlohmann::json::parse(in);
  EXPECT_EQ(doc["prices"].size(), 3u);
  EXPECT_TRUE(doc["exact_revenue"].is_string());
}

TEST(Cli, MalformedJsonReportsPosition) {
  const Result r = run({"eval", temp_file("bad.json", "{\n  \"items\": [,]\n}"), "--prices", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST(Cli, UnknownFamilyIsAnInputError) {
  const Result r = run({"eval", temp_file("family.json", R"({"items": [{"kind": "cauchy"}]})"),
                        "--prices", "1"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, UntaggedOracleSolveIsAnInputError) {
  const Result r = run(
      {"solve", temp_file("untagged.json", R"({"items": [{"kind": "exponential", "lambda": 1}]})")});
  EXPECT_EQ(r.code, 2) << r.err;
}

TEST(Cli, OversizedGridIsAResourceError) {
  const Result r = run({"solve", fixture("power_tail_pair.json")});
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST(Cli, MissingSubcommandOrFlag) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"eval", fixture("counterexample.json")}).code, 2);
}

TEST(Cli, VerifyAnchors) {
  const Result r = run({"verify-anchors", fixture("exponential_iid.json"), "--samples", "20000"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["beta_decimal"].get<double>(), std::log(4.0), 0.05);
  EXPECT_EQ(run({"verify-anchors", fixture("counterexample.json")}).code, 2);
}

TEST(Cli, Discretize) {
  const Result r = run({"discretize", fixture("mhr_discrete.json"), "--epsilon", "0.2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc.contains("provenance"));
}

TEST(Cli, CompareWritesCsv) {
  const std::string path = (fs::path(::testing::TempDir()) / "gap.csv").string();
  const Result r =
      run({"compare", fixture("counterexample.json"), "--grid", "1,3,3.5,5", "--csv", path});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path);
  std::string header, dp, brute, iid;
  std::getline(in, header);
  std::getline(in, dp);
  std::getline(in, brute);
  std::getline(in, iid);
  EXPECT_EQ(header, "solver,revenue,exact_revenue,gap_to_best,prices,status");
  EXPECT_EQ(dp.rfind("dp,", 0), 0u);
  // The DP searches a finer grid, so brute force may trail it.
  EXPECT_EQ(brute.rfind("brute,3.5,7/2,", 0), 0u) << brute;
  EXPECT_EQ(iid.rfind("iid,", 0), 0u);
}
