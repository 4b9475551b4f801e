// Copyright 2026 The ltweq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>

#include <gtest/gtest.h>

#include "support.hpp"

namespace {

struct Outcome {
  int status = -1;
  std::string out;
};

Outcome ltw_cli(const std::string& args) {
  const std::string cmd = std::string(LTW_CLI) + " " + args + " 2>/dev/null";
  Outcome r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string fx(const std::string& name) { return ltwtest::fixture_path(name); }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ltw_cli_test_" + std::to_string(getpid()));
  std::filesystem::create_directories(dir);
  return dir / name;
}

TEST(Cli, RunPrintsTheOutputWord) {
  auto r = ltw_cli("run " + fx("chain.ltw") + " --tree 'f(f(g))'");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "aaaabcabc\n");
}

TEST(Cli, RunOutsideTheDomain) {
  auto r = ltw_cli("run " + fx("chain.ltw") + " --tree 'f(g)'");
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.out.rfind("undefined: ", 0), 0u);
}

TEST(Cli, RunDescribesHugeWords) {
  auto r = ltw_cli("run " + fx("doubling.ltw") + " --tree 'g'");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "c\n");
  r = ltw_cli("run " + fx("doubling.ltw") + " --tree 'h(g,g)'");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("length 2305843009213693953"), std::string::npos) << r.out;
}

TEST(Cli, AnalyzeMatchesGolden) {
  auto r = ltw_cli("analyze " + fx("chain.ltw"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, ltwtest::read_text(ltwtest::golden_path("chain_analyze.txt")));
}

TEST(Cli, AnalyzeSingleStateLeft) {
  auto r = ltw_cli("analyze " + fx("chain.ltw") + " --state q --direction left");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("quasi-periodic(left): handle=aaaabcabc period=abc\n"), std::string::npos);
  EXPECT_EQ(r.out.find("(right)"), std::string::npos);
}

TEST(Cli, AnalyzePartMatchesGolden) {
  auto r = ltw_cli("analyze " + fx("bca_part.ltw") + " --part r:h:1 --show-tq");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, ltwtest::read_text(ltwtest::golden_path("bca_part_tq.txt")));
}

TEST(Cli, CheckEquivalentPair) {
  auto r = ltw_cli("check " + fx("reorder_a.ltw") + " " + fx("reorder_b.ltw"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "equivalent\n");
}

TEST(Cli, CheckOrderMismatch) {
  auto r = ltw_cli("check " + fx("two_loops.ltw") + " " + fx("two_loops_cba.ltw"));
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.out.rfind("not equivalent: order-mismatch\nwitness: h(f(g),g)\n", 0), 0u) << r.out;
}

TEST(Cli, CheckIsReproducibleAcrossSeeds) {
  for (const char* seed : {"1", "2", "99"}) {
    auto r = ltw_cli("check " + fx("two_loops.ltw") + " " + fx("two_loops_cba.ltw") + " --seed " + seed);
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.out.find("witness: h(f(g),g)"), std::string::npos);
  }
}

TEST(Cli, ExactModeOnHugeWordsHitsTheCap) {
  auto r = ltw_cli("check " + fx("doubling.ltw") + " " + fx("doubling.ltw") + " --exact");
  EXPECT_EQ(r.status, 3);
}

TEST(Cli, ParseErrorIsAUsageError) {
  auto bad = scratch("bad.ltw");
  std::ofstream(bad) << "input g:0\naxiom = q(x)\nrule q g = %\n";
  auto r = ltw_cli("check " + bad.string() + " " + fx("chain.ltw"));
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(ltw_cli("frobnicate").status, 2);
  EXPECT_EQ(ltw_cli("run " + fx("missing.ltw") + " --tree g").status, 2);
}

TEST(Cli, NormalizeWritesGoldenFiles) {
  for (const std::string name : {"chain", "reorder_a", "bca_part", "two_loops"}) {
    auto out = scratch(name + "_pnf.ltw"), report = scratch(name + "_report.txt");
    auto r = ltw_cli("normalize " + fx(name + ".ltw") + " -o " + out.string() + " --report " +
                     report.string());
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("states ", 0), 0u);
    EXPECT_EQ(ltwtest::read_text(out.string()),
              ltwtest::read_text(ltwtest::golden_path(name + "_pnf.ltw")))
        << name;
    // The report file carries timing lines; the golden copy does not.
    std::istringstream lines(ltwtest::read_text(report.string()));
    std::string line, stripped;
    while (std::getline(lines, line)) {
      if (line.rfind("# time", 0) != 0) stripped += line + "\n";
    }
    EXPECT_EQ(stripped, ltwtest::read_text(ltwtest::golden_path(name + "_report.txt"))) << name;
  }
}

TEST(Cli, OracleAgreesWithCheck) {
  auto same = ltw_cli("oracle " + fx("two_loops.ltw") + " " + fx("two_loops.ltw") + " --depth 4");
  EXPECT_EQ(same.status, 0);
  EXPECT_EQ(same.out.rfind("equivalent up to depth 4", 0), 0u);
  auto diff = ltw_cli("oracle " + fx("two_loops.ltw") + " " + fx("two_loops_cba.ltw") + " --depth 4 --jobs 2");
  EXPECT_EQ(diff.status, 1);
  EXPECT_NE(diff.out.find("witness: h(f(g),g)"), std::string::npos);
}

}  // namespace
