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

#include <gtest/gtest.h>

#include "invariants.hpp"

namespace {

namespace nz = ltw::normalize;
using ltw::format::parse_ltw;
using ltw::format::print_ltw;

std::string join(const ltwtest::Failures& f) {
  std::string out;
  for (std::size_t i = 0; i < f.size() && i < 10; ++i) out += f[i] + "\n";
  return out;
}

std::string rule_line(const std::string& printed, const std::string& prefix) {
  std::istringstream in(printed);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(prefix, 0) == 0) return line;
  }
  return {};
}

class Golden : public ::testing::TestWithParam<std::string> {};

TEST_P(Golden, NormalFormAndReport) {
  const std::string name = GetParam();
  auto nf = nz::partial_normal_form(ltwtest::load_fixture(name + ".ltw"));
  EXPECT_EQ(print_ltw(nf.transducer), ltwtest::read_text(ltwtest::golden_path(name + "_pnf.ltw")));
  EXPECT_EQ(nf.report.to_string(false),
            ltwtest::read_text(ltwtest::golden_path(name + "_report.txt")));
}

INSTANTIATE_TEST_SUITE_P(Fixtures, Golden,
                         ::testing::Values("chain", "reorder_a", "reorder_b", "bca_part", "two_loops",
                                           "two_loops_cba"));

TEST(MakeStateEarliest, ChainBecomesHandleAndPeriodicCopies) {
  auto m = ltwtest::load_fixture("chain.ltw");
  auto v = ltw::analysis::quasi_periodicity(m, m.state("q"), ltw::analysis::Direction::left);
  ASSERT_TRUE(v);
  auto mq = nz::make_state_earliest(m, m.state("q"), *v);
  EXPECT_EQ(print_ltw(mq), ltwtest::read_text(ltwtest::golden_path("chain_pnf.ltw")));
  // Length law on f(f(g)): the copy outputs 9 symbols fewer.
  auto t = ltw::format::parse_tree("f(f(g))");
  EXPECT_EQ(m.pool().length(ltw::evaluate_state(m, m.state("q"), t)), 9);
  EXPECT_EQ(m.pool().length(ltw::evaluate_state(mq, mq.state("q__e"), t)), 0);
}

TEST(MakeStateEarliest, ErasingStateIsOnlyRenamed) {
  auto m = parse_ltw(
      "input h:1, f:1, g:0\naxiom = r(x)\nrule r h(x1) = \"a\" e(x1) \"b\"\nrule e f(x1) = e(x1)\n"
      "rule e g = \"\"\n");
  auto v = ltw::analysis::quasi_periodicity(m, m.state("e"), ltw::analysis::Direction::left);
  ASSERT_TRUE(v);
  EXPECT_TRUE(v->trivial(m.pool()));
  auto out = nz::make_state_earliest(m, m.state("e"), *v);
  EXPECT_EQ(rule_line(print_ltw(out), "rule r h"), "rule r h(x1) = \"a\" e__e(x1) \"b\"");
  EXPECT_EQ(rule_line(print_ltw(out), "rule e__e f"), "rule e__e f(x1) = e__e(x1)");
}

TEST(MakeStateEarliest, WrongHandleIsRejected) {
  auto m = ltwtest::load_fixture("chain.ltw");
  auto v = ltw::analysis::quasi_periodicity(m, m.state("q"), ltw::analysis::Direction::left);
  v->handle = m.pool().literal("aaaa");
  EXPECT_THROW(nz::make_state_earliest(m, m.state("q"), *v), ltw::InvalidVerdict);
}

TEST(EliminateQuasiPeriodic, NothingToDo) {
  auto m = parse_ltw("input g:0, e:0\naxiom = q(x)\nrule q g = \"a\"\nrule q e = \"b\"\n");
  nz::NormalizationReport report;
  auto out = nz::eliminate_quasi_periodic_states(m, report);
  EXPECT_TRUE(report.actions.empty());
  EXPECT_EQ(print_ltw(out), print_ltw(m));
}

TEST(EliminateQuasiPeriodic, ChainOfQuasiPeriodicStatesStaysWithinTheStateBound) {
  for (std::size_t k : {5, 10, 20}) {
    auto m = parse_ltw(ltwtest::chain_text(k));
    auto out = nz::partial_normal_form(m).transducer;
    EXPECT_LE(out.state_count(), m.state_count() + m.call_site_count()) << k;
    EXPECT_EQ(out.state_count(), k) << k;
    EXPECT_TRUE(ltw::oracle::brute_equiv(m, out, ltwtest::depth5_budget()).equivalent);
  }
}

TEST(EraseOrder, ErasingCallsMoveToTheEnd) {
  auto m = ltwtest::load_fixture("erase_four.ltw");
  EXPECT_EQ(rule_line(print_ltw(nz::erase_order(m)), "rule q0 f"),
            "rule q0 f(x1,x2,x3,x4) = q2(x3) q4(x1) q1(x2) q1(x4)");
}

TEST(EraseOrder, NoErasingCallsMeansNoChange) {
  auto m = ltwtest::load_fixture("two_loops.ltw");
  nz::NormalizationReport report;
  EXPECT_EQ(print_ltw(nz::erase_order(m, report)), print_ltw(m));
  EXPECT_TRUE(report.actions.empty());
}

TEST(EraseOrder, WordsAfterAnErasingCallMoveLeft) {
  auto m = parse_ltw(
      "input h:1, f:1, g:0\naxiom = r(x)\nrule r h(x1) = \"a\" e(x1) \"b\"\nrule e f(x1) = e(x1)\n"
      "rule e g = \"\"\n");
  EXPECT_EQ(rule_line(print_ltw(nz::erase_order(m)), "rule r h"), "rule r h(x1) = \"ab\" e(x1)");
}

TEST(RuleParts, QuasiPeriodicPartBecomesEarliest) {
  auto m = ltwtest::load_fixture("two_loops.ltw");
  auto out = print_ltw(nz::make_rule_parts_earliest(m));
  EXPECT_EQ(rule_line(out, "rule q h"), "rule q h(x1,x2) = \"b\" q1__e(x2) q2(x1)");
  EXPECT_EQ(rule_line(out, "rule q1__e f"), "rule q1__e f(x1) = \"cabcab\" q1__e(x1)");
}

TEST(RuleParts, EarliestPeriodicPartIsUnchanged) {
  auto m = parse_ltw(
      "input h:1, f:1, g:0\naxiom = r(x)\nrule r h(x1) = \"a\" q(x1)\nrule r g = \"\"\n"
      "rule q f(x1) = \"ab\" q(x1)\nrule q g = \"\"\n");
  nz::NormalizationReport report;
  nz::Context ctx;
  EXPECT_EQ(print_ltw(nz::make_rule_parts_earliest(m, report, ctx)), print_ltw(m));
  EXPECT_TRUE(report.actions.empty());
}

TEST(RuleParts, NonQuasiPeriodicPartsAreUnchanged) {
  auto m = parse_ltw(
      "input h:1, g:0, e:0\naxiom = r(x)\nrule r h(x1) = q(x1) \"c\"\nrule r g = \"\"\n"
      "rule q g = \"a\"\nrule q e = \"b\"\n");
  EXPECT_EQ(print_ltw(nz::make_rule_parts_earliest(m)), print_ltw(m));
}

// Two parts over the same state s4 with different trailing words need copies
// at different rotations; the scaffold wrapping s4 has the same name both
// times, so its copy must not be shared.
TEST(RuleParts, ScaffoldCopiesAreNotShared) {
  auto m = parse_ltw(
      "input h:2, f:1, g:0\naxiom = s0(x)\n"
      "rule s0 h(x1,x2) = \"cabc\" s4(x2) \"ab\" s2(x1)\nrule s0 f(x1) = \"bc\" s3(x1) \"bcab\"\n"
      "rule s0 g = \"ac\"\nrule s1 g = \"abca\"\nrule s2 g = \"\"\n"
      "rule s3 h(x1,x2) = \"c\" s4(x1) \"aa\" s2(x2) \"abca\"\nrule s3 g = \"\"\n"
      "rule s4 h(x1,x2) = s4(x2) s1(x1) \"bcab\"\nrule s4 g = \"\"\n");
  auto nf = nz::partial_normal_form(m);
  const std::string text = print_ltw(nf.transducer);
  EXPECT_EQ(rule_line(text, "rule s0 h"), "rule s0 h(x1,x2) = \"cabcab\" s4__e(x2) s2(x1)");
  EXPECT_EQ(rule_line(text, "rule s4 h"), "rule s4 h(x1,x2) = \"abcabcab\" s4__e2(x2) s1__e(x1)");
  auto v = ltw::oracle::brute_equiv(m, nf.transducer, ltwtest::depth5_budget());
  EXPECT_TRUE(v.equivalent) << v.detail << " on " << v.witness->to_string();
  auto tree = ltw::format::parse_tree("f(h(h(g,h(g,g)),g))", m.alphabet());
  EXPECT_EQ(m.pool().expand(ltw::evaluate(nf.transducer, tree)), "bccabcabcababcabcabaaabcabcab");
}

TEST(Reorder, SamePeriodRunIsSorted) {
  auto m = nz::make_rule_parts_earliest(ltwtest::load_fixture("two_loops.ltw"));
  auto out = nz::reorder_periodic_runs(m);
  EXPECT_EQ(rule_line(print_ltw(out), "rule q h"), "rule q h(x1,x2) = \"b\" q2(x1) q1__e(x2)");
  ltw::oracle::EnumerationBudget budget;
  budget.max_depth = 4;
  EXPECT_TRUE(ltw::oracle::brute_equiv(m, out, budget).equivalent);
}

TEST(Reorder, AscendingRunIsUnchanged) {
  auto m = ltwtest::load_fixture("reorder_b.ltw");
  auto once = nz::reorder_periodic_runs(m);
  nz::NormalizationReport report;
  EXPECT_EQ(print_ltw(nz::reorder_periodic_runs(once, report)), print_ltw(once));
  EXPECT_TRUE(report.actions.empty());
}

TEST(Reorder, DifferentPeriodsAreNotSwapped) {
  auto m = nz::make_rule_parts_earliest(ltwtest::load_fixture("two_loops_cba.ltw"));
  EXPECT_EQ(print_ltw(nz::reorder_periodic_runs(m)), print_ltw(m));
}

TEST(Replay, ReproducesEveryFixture) {
  for (const auto& name : ltwtest::fixture_names()) {
    auto m = ltwtest::load_fixture(name);
    auto nf = nz::partial_normal_form(m);
    EXPECT_EQ(print_ltw(nz::replay(m, nf.report)), print_ltw(nf.transducer)) << name;
  }
}

TEST(Report, TimingsAreCommentLines) {
  auto nf = nz::partial_normal_form(ltwtest::load_fixture("chain.ltw"));
  const std::string text = nf.report.to_string();
  EXPECT_NE(text.find("# time quasi-periodic-states "), std::string::npos);
  EXPECT_EQ(nf.report.count(nz::Action::Kind::replace_state), 1u);
}

TEST(NormalizeProperty, EveryStagePreservesSemantics) {
  auto pool = std::make_shared<ltw::SlpPool>();
  auto f = ltwtest::semantics_preservation(ltwtest::corpus(41, 80, pool), ltwtest::depth5_budget());
  EXPECT_TRUE(f.empty()) << join(f);
}

TEST(NormalizeProperty, EarliestCopiesSatisfyLengthAndPeriodLaws) {
  auto pool = std::make_shared<ltw::SlpPool>();
  std::size_t applications = 0;
  auto f = ltwtest::earliest_copy_laws(ltwtest::corpus(42, 60, pool), &applications,
                                ltwtest::depth5_budget());
  EXPECT_TRUE(f.empty()) << join(f);
  EXPECT_GT(applications, 30u);
}

TEST(NormalizeProperty, SecondPassDoesNothing) {
  auto pool = std::make_shared<ltw::SlpPool>();
  for (const auto& m : ltwtest::corpus(43, 100, pool)) {
    auto once = nz::partial_normal_form(m);
    auto twice = nz::partial_normal_form(once.transducer);
    EXPECT_EQ(twice.report.count(nz::Action::Kind::replace_state), 0u) << print_ltw(m);
    EXPECT_EQ(twice.report.count(nz::Action::Kind::reorder_run), 0u) << print_ltw(m);
    EXPECT_EQ(twice.report.count(nz::Action::Kind::part_earliest), 0u) << print_ltw(m);
    EXPECT_EQ(print_ltw(twice.transducer), print_ltw(once.transducer));
  }
}

TEST(NormalizeProperty, StateGrowthIsBounded) {
  auto pool = std::make_shared<ltw::SlpPool>();
  for (const auto& m : ltwtest::corpus(44, 100, pool)) {
    auto out = nz::partial_normal_form(m).transducer;
    EXPECT_LE(out.state_count(), m.state_count() + m.call_site_count()) << print_ltw(m);
  }
}

TEST(NormalizeProperty, ReplayMatches) {
  auto pool = std::make_shared<ltw::SlpPool>();
  for (const auto& m : ltwtest::corpus(45, 60, pool)) {
    auto nf = nz::partial_normal_form(m);
    EXPECT_EQ(print_ltw(nz::replay(m, nf.report)), print_ltw(nf.transducer));
  }
}

TEST(NormalizeProperty, CompressedWordsStayCompressed) {
  auto m = ltwtest::load_fixture("doubling.ltw");
  const std::size_t before = m.pool().node_count();
  auto nf = nz::partial_normal_form(m);
  EXPECT_LT(m.pool().node_count() - before, 20'000u);
  EXPECT_EQ(nf.report.count(nz::Action::Kind::replace_state), 1u);
}

}  // namespace
