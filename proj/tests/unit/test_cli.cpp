// Copyright 2026 The oqlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli/commands.hpp"
#include "oqlab/oq.hpp"

namespace fs = std::filesystem;

namespace oqlab {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("oqlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

std::string data(const char* name) { return std::string(OQLAB_TEST_DATA_DIR) + "/" + name; }

TEST(Cli, PredictPrintsTheExactNegativity) {
  auto r = run({"predict", "--theta", "45", "--phi", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["negativity"].get<double>(), 0.103553, 1e-6);
  EXPECT_EQ(j["schema_version"].get<int>(), 1);
  for (auto angles : {std::pair{"0", "0"}, std::pair{"45", "90"}}) {
    r = run({"predict", "--theta", angles.first, "--phi", angles.second});
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(nlohmann::json::parse(r.out)["negativity"].get<double>(), 0.0, 1e-12);
  }
}

TEST(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"predict", "--theta", "45"}).code, 2);
  EXPECT_EQ(run({"predict", "--theta", "x", "--phi", "0"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"predict", "--theta", "nan", "--phi", "0"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, SimulateIsDeterministic) {
  const auto a = dir_ / "a";
  const auto b = dir_ / "b";
  for (const auto& d : {a, b}) {
    auto r = run({"simulate", "--theta", "45", "--photons", "5000", "--seed", "9", "--out-dir",
                  d.string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  for (const char* f : {"counts_11.csv", "counts_01.csv", "counts_10.csv", "report.json"}) {
    EXPECT_FALSE(slurp(a / f).empty()) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  run({"simulate", "--theta", "45", "--photons", "5000", "--seed", "10", "--out-dir",
       (dir_ / "c").string()});
  EXPECT_NE(slurp(a / "counts_11.csv"), slurp(dir_ / "c" / "counts_11.csv"));
}

TEST_F(CliTest, AnalyzeLabCounts) {
  auto r = run({"analyze", data("lab_counts_theta45.csv"), "--out", (dir_ / "r.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(dir_ / "r.json"));
  EXPECT_NEAR(j["negativity"].get<double>(), 0.0968923542, 1e-9);
  EXPECT_GT(j["error"]["negativity_statistical"].get<double>(), 0.0);
  EXPECT_EQ(slurp(dir_ / "r.json"), r.out);
}

TEST_F(CliTest, AnalyzeFailures) {
  const auto empty = dir_ / "empty.csv";
  std::ofstream(empty).close();
  EXPECT_EQ(run({"analyze", empty.string()}).code, 3);
  EXPECT_EQ(run({"analyze", (dir_ / "missing.csv").string()}).code, 4);
  // Only the (1,1) table: the PBS1-out run is missing.
  const auto partial = dir_ / "partial.csv";
  std::ofstream(partial) << "n1,n2,a1,a2,counts\n1,1,0,0,5\n1,1,0,1,5\n1,1,1,0,5\n1,1,1,1,5\n";
  const auto r = run({"analyze", partial.string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run({"analyze", data("lab_counts_theta45.csv"), "--mode", "fancy"}).code, 2);
  EXPECT_EQ(run({"analyze", data("lab_counts_theta45.csv"), "--dark-counts", "1,2"}).code, 2);
}

TEST_F(CliTest, WeakFieldDarkCorrectionRaisesNegativity) {
  auto r = run({"simulate", "--source", "weak", "--mean", "6e-3", "--pulses", "1000000",
                "--out-dir", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto c11 = (dir_ / "counts_11.csv").string();
  const auto c01 = (dir_ / "counts_01.csv").string();
  const auto raw = run({"analyze", c11, c01});
  const auto fixed = run({"analyze", c11, c01, "--dark-counts", (dir_ / "dark_counts.csv").string()});
  ASSERT_EQ(raw.code, 0) << raw.err;
  ASSERT_EQ(fixed.code, 0) << fixed.err;
  EXPECT_GT(nlohmann::json::parse(fixed.out)["negativity"].get<double>(),
            nlohmann::json::parse(raw.out)["negativity"].get<double>());
}

TEST_F(CliTest, ScanWritesCsv) {
  const auto path = dir_ / "scan.csv";
  const auto r = run({"scan", "--kind", "pure", "--theta-step", "5", "--phi-step", "5", "--out",
                      path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("max negativity"), std::string::npos);
  EXPECT_EQ(slurp(path).rfind("# schema_version: 1\n", 0), 0u);
  EXPECT_EQ(run({"scan", "--kind", "ring", "--out", path.string()}).code, 2);
}

TEST_F(CliTest, G2ReportsZeroDelayValue) {
  const auto cfg = dir_ / "e.cfg";
  std::ofstream(cfg) << "source = emitter\ncollection_efficiency = 0.1\nduration_s = 0.2\n";
  const auto r = run({"g2", "--config", cfg.string(), "--out", (dir_ / "g2.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("g2(0)"), std::string::npos);
  EXPECT_FALSE(slurp(dir_ / "g2.csv").empty());
  EXPECT_EQ(run({"g2", "--config", (dir_ / "nope.cfg").string()}).code, 4);
}

}  // namespace
}  // namespace oqlab
