// Copyright 2026 The qsep Authors
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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int status = -1;
  std::string out;
};

Outcome run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + QSEP_CLI_PATH + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) o.out += buf;
  const int raw = pclose(pipe);
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qsep_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(CliTest, Help) { EXPECT_EQ(run("--help").status, 0); }

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("estimate --measure bures --points 0").status, 2);
  EXPECT_EQ(run("estimate --measure nope --points 4000000").status, 2);
  EXPECT_EQ(run("estimate --points 4000000").status, 2);
  EXPECT_EQ(run("estimate --measure hs --points 10 --block 0").status, 2);
  EXPECT_EQ(run("estimate --measure hs --points 100 --block 100 --policy eigen-floor:-1").status, 2);
  EXPECT_EQ(run("estimate --measure hs --points 100 --block 100 --bins 0").status, 2);
  EXPECT_EQ(run("estimate --measure hs --points 100 --block 100", "QSEP_WORKERS=abc").status, 2);
  EXPECT_EQ(run("verify --quantity nope").status, 2);
  EXPECT_EQ(run("verify --format xml").status, 2);
  EXPECT_EQ(run("abs-sep --measure nope").status, 2);
}

TEST_F(CliTest, UnwritableOutput) {
  const std::string out = (dir_ / "missing" / "run").string();
  EXPECT_EQ(run("estimate --measure hs --points 1000 --block 1000 --output " + out).status, 3);
}

TEST_F(CliTest, EstimateWritesTraceAndSummary) {
  const std::string prefix = (dir_ / "hs").string();
  const Outcome o =
      run("estimate --measure hs --points 250000 --block 100000 --workers 1 --output " + prefix);
  ASSERT_EQ(o.status, 0);
  const std::string trace = slurp(prefix + ".trace.csv");
  std::istringstream lines(trace);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "block,points,sep_estimate,abs_sep_estimate,discards,ess");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 2);  // floor(points / block)

  const auto j = nlohmann::json::parse(slurp(prefix + ".summary.json"));
  EXPECT_EQ(j["measure"], "hs");
  EXPECT_EQ(j["points"], 250000);
  EXPECT_EQ(j["policy"], "none");
  EXPECT_GT(j["sep_estimate"].get<double>(), 0.15);
  EXPECT_LT(j["sep_estimate"].get<double>(), 0.35);
  EXPECT_TRUE(j.contains("ess"));
  EXPECT_TRUE(j.contains("wall_seconds"));
  EXPECT_EQ(nlohmann::json::parse(o.out)["sep_estimate"], j["sep_estimate"]);
}

TEST_F(CliTest, SummaryIndependentOfWorkers) {
  const std::string a = (dir_ / "a").string();
  const std::string b = (dir_ / "b").string();
  const std::string args = "estimate --measure geometric --policy eigen-floor:1e-4 "
                           "--points 200000 --block 100000 --output ";
  ASSERT_EQ(run(args + a, "QSEP_WORKERS=1").status, 0);
  ASSERT_EQ(run(args + b + " --workers 3", "QSEP_WORKERS=1").status, 0);
  auto ja = nlohmann::json::parse(slurp(a + ".summary.json"));
  auto jb = nlohmann::json::parse(slurp(b + ".summary.json"));
  EXPECT_GT(ja["rejected"].get<long>(), 0);
  ja.erase("wall_seconds");
  jb.erase("wall_seconds");
  EXPECT_EQ(ja, jb);
  EXPECT_EQ(slurp(a + ".trace.csv"), slurp(b + ".trace.csv"));
}

TEST_F(CliTest, VerifySingleQuantities) {
  const Outcome a = run("verify --quantity hs-abs --format csv");
  EXPECT_EQ(a.status, 0);
  EXPECT_NE(a.out.find("hs-abs,0.00365826305"), std::string::npos) << a.out;
  const Outcome b = run("verify --quantity d4-sqrtx-denominator");
  EXPECT_EQ(b.status, 0);
  EXPECT_NE(b.out.find("infinite"), std::string::npos) << b.out;
  const Outcome c = run("verify --quantity hs-ratio --quantity li2-1 --format csv");
  EXPECT_EQ(c.status, 0);
  EXPECT_NE(c.out.find("hs-ratio,0.242424242"), std::string::npos) << c.out;
  EXPECT_NE(c.out.find("li2-1,"), std::string::npos);
}

TEST_F(CliTest, VerifyList) {
  const Outcome o = run("verify --list");
  EXPECT_EQ(o.status, 0);
  EXPECT_NE(o.out.find("abs-sep-kubo-mori"), std::string::npos);
}

TEST_F(CliTest, AbsSepCommand) {
  const Outcome g = run("abs-sep --measure geometric");
  EXPECT_EQ(g.status, 0);
  EXPECT_NE(g.out.find("divergent"), std::string::npos);
  const Outcome h = run("abs-sep --measure hs");
  EXPECT_EQ(h.status, 0);
  EXPECT_NE(h.out.find("hs,0.00365826"), std::string::npos) << h.out;
}

TEST_F(CliTest, BlochBins) {
  const Outcome o = run("bloch-bins --measure hs --points 100000 --block 100000 --bins 5");
  EXPECT_EQ(o.status, 0);
  EXPECT_NE(o.out.find("lo,hi,count,sep_estimate,abs_sep_estimate"), std::string::npos);
  EXPECT_NE(o.out.find("0.800,1.000,"), std::string::npos) << o.out;
}

}  // namespace
