#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"

using mmse_lab::cli::run;
using nlohmann::json;

namespace {

const std::string kDists = std::string(MMSE_LAB_SOURCE_DIR) + "/data/dists/";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mmse-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const json& golden() {
  static const json g = [] {
    std::ifstream f(std::string(MMSE_LAB_SOURCE_DIR) + "/tests/golden/cli_schemas.json");
    return json::parse(f);
  }();
  return g;
}

std::vector<std::string> keys(const json& j) {
  std::vector<std::string> k;
  for (auto it = j.begin(); it != j.end(); ++it) k.push_back(it.key());
  return k;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

void expect_schema(const std::string& name, const json& j) {
  EXPECT_EQ(j.at("schema"), golden()[name]["schema"]);
  EXPECT_EQ(keys(j), golden()[name]["keys"].get<std::vector<std::string>>()) << name;
}

}  // namespace

TEST(Cli, CurveCsv) {
  const auto r = invoke({"curve", "--dist", kDists + "binary.json", "--snr-grid", "lin:0:2:3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(first_line(r.out), golden()["curve"]["csv_header"]);
  std::istringstream lines(r.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) ++n;
  EXPECT_EQ(n, 4);
  // snr = 0 row: mmse equals the variance, 1.
  EXPECT_NE(r.out.find("\n0,1,"), std::string::npos);
}

TEST(Cli, CurveWithMonteCarlo) {
  const auto r = invoke({"curve", "--dist", kDists + "gauss01.json", "--snr-grid", "1", "--verify", "mc:seed=4,n=20000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(first_line(r.out), golden()["curve_mc"]["csv_header"]);
}

TEST(Cli, PosteriorCsv) {
  auto r = invoke({"post", "--dist", kDists + "binary.json", "--snr", "1", "--y-grid", "0,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(first_line(r.out), golden()["post"]["csv_header"]);
  r = invoke({"post", "--dist", kDists + "binary.json", "--snr", "1", "--y-grid", "0.5", "--kmax", "2", "--verify",
              "mc:n=20000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(first_line(r.out), golden()["post_mc"]["csv_header"]);
}

TEST(Cli, DerivJson) {
  const auto r = invoke({"deriv", "--dist", kDists + "binary.json", "--snr", "1", "--verify", "fd"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  expect_schema("deriv", j);
  ASSERT_EQ(j["rows"].size(), 3u);
  EXPECT_EQ(keys(j["rows"][0]), golden()["deriv"]["row_keys"].get<std::vector<std::string>>());
  EXPECT_TRUE(j["passed"].get<bool>());
}

TEST(Cli, InfoJson) {
  const auto r = invoke({"info", "--dist", kDists + "binary.json", "--snr", "2", "--entropy", "--bits"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  expect_schema("info", j);
  EXPECT_EQ(j["unit"], "bits");
  EXPECT_NEAR(j["entropy"].get<double>(), 1.0, 2e-3);
}

TEST(Cli, CrossJson) {
  const std::string csv = ::testing::TempDir() + "cross.csv";
  const auto r = invoke({"cross", "--dist", kDists + "binary_sqrt2.json", "--sigma2", "1", "--csv", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  expect_schema("cross", j);
  EXPECT_EQ(j["classification"], "single_crossing");
  EXPECT_FALSE(j["snr0"].is_null());
  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "gamma,f");
}

TEST(Cli, CapacityJson) {
  auto r = invoke({"capacity", "wiretap", "--snr1", "3", "--snr2", "1", "--dist", kDists + "binary.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  expect_schema("wiretap", j);
  EXPECT_GT(j["slack"].get<double>(), 0.0);

  r = invoke({"capacity", "broadcast", "--snr1", "4", "--snr2", "1", "--family", kDists + "family_gaussian.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  j = json::parse(r.out);
  expect_schema("broadcast", j);
  EXPECT_NEAR(j["converse"]["alpha"].get<double>(), 0.3, 1e-6);

  r = invoke({"capacity", "epi", "--dist", kDists + "gaussian_mixture.json", "--varz", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  expect_schema("epi", json::parse(r.out));
}

TEST(Cli, CheckAll) {
  const auto r = invoke({"check", "all"});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const auto j = json::parse(r.out);
  expect_schema("check", j);
  EXPECT_EQ(j["failed"], 0);
}

TEST(Cli, InlineDistribution) {
  const auto r = invoke({"curve", "--dist", R"({"kind":"gaussian","mean":0,"variance":1})", "--snr-grid", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto row = r.out.substr(r.out.find('\n') + 1);
  EXPECT_NEAR(std::stod(row.substr(row.find(',') + 1)), 0.5, 1e-14) << r.out;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({"curve", "--dist", kDists + "missing.json"}).code, 2);
  EXPECT_EQ(invoke({"curve", "--dist", kDists + "binary.json", "--bogus"}).code, 2);
  EXPECT_EQ(invoke({"curve", "--dist", R"({"kind":"discrete","atoms":[[0,0.4],[1,0.4]]})"}).code, 2);
  EXPECT_EQ(invoke({"curve", "--dist", kDists + "binary.json", "--snr-grid", "log:0:1:5"}).code, 2);
  EXPECT_EQ(invoke({"curve", "--dist", kDists + "binary.json", "--verify", "mc:seed=x"}).code, 2);
  EXPECT_EQ(invoke({"capacity", "wiretap", "--snr1", "1", "--snr2", "2"}).code, 2);
  EXPECT_EQ(invoke({"capacity", "wiretap", "--snr1", "3", "--snr2", "1", "--dist", kDists + "binary_sqrt2.json"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  // A deliberately impossible tolerance fails verification.
  EXPECT_EQ(invoke({"deriv", "--dist", kDists + "binary.json", "--snr", "1", "--verify", "fd", "--tol", "0"}).code, 3);
}

TEST(Cli, GridParsing) {
  using mmse_lab::cli::parse_grid;
  EXPECT_EQ(parse_grid("1,2.5"), (std::vector<double>{1.0, 2.5}));
  const auto lin = parse_grid("lin:0:1:5");
  ASSERT_EQ(lin.size(), 5u);
  EXPECT_DOUBLE_EQ(lin[2], 0.5);
  const auto lg = parse_grid("log:1e-2:1e2:5");
  EXPECT_NEAR(lg[2], 1.0, 1e-15);
  EXPECT_EQ(lg.back(), 100.0);
  EXPECT_THROW(parse_grid("cubic:0:1:3"), mmse_lab::InputError);
  EXPECT_THROW(parse_grid("lin:0:1"), mmse_lab::InputError);
  EXPECT_THROW(parse_grid("1,,2"), mmse_lab::InputError);
}

TEST(Cli, VerifyParsing) {
  using mmse_lab::cli::parse_verify;
  auto v = parse_verify("fd+mc:seed=9,n=5000", 1);
  EXPECT_TRUE(v.fd);
  EXPECT_TRUE(v.mc);
  EXPECT_EQ(v.seed, 9u);
  EXPECT_EQ(v.n, 5000u);
  v = parse_verify("mc", 42);
  EXPECT_EQ(v.seed, 42u);
  EXPECT_EQ(v.n, 1'000'000u);
  EXPECT_THROW(parse_verify("bootstrap", 1), mmse_lab::InputError);
  EXPECT_THROW(parse_verify("mc:depth=3", 1), mmse_lab::InputError);
}
