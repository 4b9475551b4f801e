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

// ltw: command-line front end.
//
// Exit codes: 0 success or Equivalent, 1 NotEquivalent or undefined input,
// 2 usage or parse error, 3 expansion cap exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ltw/ltw.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDifferent = 1;
constexpr int kUsage = 2;
constexpr int kCap = 3;

struct PoolFlags {
  std::uint64_t seed = ltw::PoolOptions{}.seed;
  bool exact = false;

  std::shared_ptr<ltw::SlpPool> make() const {
    ltw::PoolOptions o;
    o.seed = seed;
    if (exact) o.mode = ltw::EqualityMode::exact;
    return std::make_shared<ltw::SlpPool>(o);
  }
};

class UsageError : public ltw::Error {
 public:
  using ltw::Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

ltw::Ltw load(const std::string& path, std::shared_ptr<ltw::SlpPool> pool) {
  try {
    return ltw::format::parse_ltw(read_file(path), std::move(pool));
  } catch (const ltw::ParseError& e) {
    throw UsageError(path + ":" + e.what());
  }
}

// Unquoted word for verdict lines; long words are summarized.
std::string bare(const ltw::SlpPool& pool, ltw::WordRef w) {
  if (pool.is_empty(w)) return "\"\"";
  if (pool.length(w) <= 64) return pool.expand(w, 64);
  return ltw::format::describe_word(pool, w);
}

void print_verdict(const ltw::equivalence::EquivVerdict& v) {
  if (v.equivalent) {
    std::cout << "equivalent\n";
    return;
  }
  std::cout << "not equivalent: " << ltw::equivalence::to_string(v.reason) << "\n";
  if (v.witness) std::cout << "witness: " << v.witness->to_string() << "\n";
  if (!v.detail.empty()) std::cout << "detail: " << v.detail << "\n";
}

std::string verdict_line(const ltw::SlpPool& pool, ltw::analysis::Direction d,
                         const std::optional<ltw::analysis::QuasiPeriodicity>& v) {
  std::string out = std::string("quasi-periodic(") + ltw::analysis::to_string(d) + "): ";
  if (!v) return out + "none";
  return out + "handle=" + bare(pool, v->handle) + " period=" + bare(pool, v->period);
}

std::vector<ltw::analysis::Direction> directions(const std::string& flag) {
  using ltw::analysis::Direction;
  if (flag == "left") return {Direction::left};
  if (flag == "right") return {Direction::right};
  return {Direction::left, Direction::right};
}

void analyze_state(const ltw::Ltw& m, ltw::StateId q, const ltw::analysis::ShortestWords& sw,
                   const std::vector<bool>& erasing, const std::string& direction, bool show_tq) {
  const ltw::SlpPool& pool = m.pool();
  std::cout << "state " << m.name(q) << "\n";
  if (!sw.productive(q)) {
    std::cout << "domain: empty\n";
    return;
  }
  const ltw::WordRef w = sw.word[index(q)];
  std::cout << "shortest: length=" << pool.length(w).str() << " word=" << bare(pool, w) << "\n";
  std::cout << "erasing: " << (erasing[index(q)] ? "yes" : "no") << "\n";
  for (auto d : directions(direction)) {
    std::cout << verdict_line(pool, d, ltw::analysis::quasi_periodicity(m, q, d)) << "\n";
  }
  const auto table = ltw::analysis::mock_shift_table(m, q, sw);
  std::cout << "shifts:";
  for (const auto& [p, s] : table.shift) std::cout << " " << m.name(p) << "=" << s.str();
  std::cout << "\n";
  if (show_tq) {
    std::cout << ltw::format::print_ltw(
        ltw::analysis::build_Tq(ltw::trim(ltw::restrict_to(m, q)), q));
  }
}

int analyze_part(const ltw::Ltw& m, const std::string& selector, bool show_tq) {
  // state:symbol:index with a 1-based call index.
  const auto a = selector.find(':');
  const auto b = selector.rfind(':');
  if (a == std::string::npos || a == b) throw UsageError("--part expects state:symbol:index");
  const std::string state = selector.substr(0, a);
  const std::string symbol = selector.substr(a + 1, b - a - 1);
  std::size_t k = 0;
  try {
    k = std::stoul(selector.substr(b + 1));
  } catch (const std::exception&) {
    throw UsageError("--part index must be a positive integer");
  }
  const auto q = m.find_state(state);
  const auto f = m.alphabet().find(symbol);
  if (!q || !f || k == 0) throw UsageError("no rule part " + selector);
  const ltw::Rule* rule = m.rule(*q, *f);
  if (rule == nullptr || k > rule->calls.size()) throw UsageError("no rule part " + selector);
  const ltw::SlpPool& pool = m.pool();
  const ltw::Call& c = rule->calls[k - 1];
  std::cout << "part " << m.name(c.state) << "(x" << c.child + 1 << ") "
            << ltw::format::describe_word(pool, rule->words[k]) << "\n";
  auto v = ltw::analysis::rule_part_quasi_periodicity(m, *q, *f, k - 1);
  std::cout << verdict_line(pool, ltw::analysis::Direction::left, v) << "\n";
  if (show_tq) {
    auto scaffold = ltw::analysis::add_hat_state(m, c.state, rule->words[k]);
    ltw::Ltw r = ltw::trim(ltw::restrict_to(scaffold.transducer, scaffold.hat));
    std::cout << ltw::format::print_ltw(ltw::analysis::build_Tq(r, r.axiom().state));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivalence and normalization of linear tree-to-word transducers"};
  app.require_subcommand(1);
  PoolFlags pool_flags;
  unsigned jobs = 1;
  auto add_pool_flags = [&](CLI::App* cmd) {
    cmd->add_option("--seed", pool_flags.seed, "Seed of the fingerprint lanes");
    cmd->add_flag("--exact", pool_flags.exact, "Compare words by expansion");
  };

  std::string file_a, file_b, out_file, report_file, tree_text, state_name, part;
  std::string direction = "both";
  std::size_t depth = 6, max_len = 1'000'000;
  bool show_tq = false;

  auto* check = app.add_subcommand("check", "Decide equivalence of two transducers");
  check->add_option("A", file_a)->required();
  check->add_option("B", file_b)->required();
  check->add_option("--depth", depth, "Depth of the witness search after an order mismatch");
  check->add_option("--jobs", jobs, "Worker threads for the witness search");
  add_pool_flags(check);

  auto* norm = app.add_subcommand("normalize", "Compute the partial normal form");
  norm->add_option("A", file_a)->required();
  norm->add_option("-o,--output", out_file)->required();
  norm->add_option("--report", report_file, "Write the action report here");
  add_pool_flags(norm);

  auto* run = app.add_subcommand("run", "Evaluate a transducer on a tree");
  run->add_option("A", file_a)->required();
  run->add_option("--tree", tree_text)->required();
  run->add_option("--max-len", max_len, "Longest output printed in full");
  add_pool_flags(run);

  auto* analyze = app.add_subcommand("analyze", "Per-state shortest words and periodicity");
  analyze->add_option("A", file_a)->required();
  analyze->add_option("--state", state_name);
  analyze->add_option("--direction", direction)
      ->check(CLI::IsMember({"left", "right", "both"}));
  analyze->add_option("--part", part, "Rule part state:symbol:index (index from 1)");
  analyze->add_flag("--show-tq", show_tq, "Print the candidate quasi-periodic transducer");
  add_pool_flags(analyze);

  auto* oracle = app.add_subcommand("oracle", "Brute-force comparison on bounded trees");
  oracle->add_option("A", file_a)->required();
  oracle->add_option("B", file_b)->required();
  oracle->add_option("--depth", depth)->required();
  oracle->add_option("--jobs", jobs);
  add_pool_flags(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    auto pool = pool_flags.make();
    if (*check) {
      const auto a = load(file_a, pool);
      const auto b = load(file_b, pool);
      ltw::equivalence::DecideOptions options;
      options.witness_depth = depth;
      options.jobs = jobs;
      const auto v = ltw::equivalence::decide_equiv(a, b, options);
      print_verdict(v);
      return v.equivalent ? kOk : kDifferent;
    }
    if (*norm) {
      const auto a = load(file_a, pool);
      const auto nf = ltw::normalize::partial_normal_form(a);
      write_file(out_file, ltw::format::print_ltw(nf.transducer));
      if (!report_file.empty()) write_file(report_file, nf.report.to_string());
      std::cout << "states " << a.state_count() << " -> " << nf.transducer.state_count()
                << ", actions " << nf.report.actions.size() << "\n";
      return kOk;
    }
    if (*run) {
      const auto a = load(file_a, pool);
      const auto t = ltw::format::parse_tree(tree_text, a.alphabet());
      try {
        const auto w = ltw::evaluate(a, t);
        if (pool->length(w) <= max_len) {
          std::cout << pool->expand(w, max_len) << "\n";
        } else {
          std::cout << ltw::format::describe_word(*pool, w) << "\n";
        }
      } catch (const ltw::UndefinedInput& e) {
        std::cout << "undefined: " << e.what() << "\n";
        return kDifferent;
      }
      return kOk;
    }
    if (*analyze) {
      const auto a = load(file_a, pool);
      if (!part.empty()) return analyze_part(a, part, show_tq);
      const auto sw = ltw::analysis::shortest_words(a);
      const auto erasing = ltw::analysis::erasing_states(a);
      if (!state_name.empty()) {
        const auto q = a.find_state(state_name);
        if (!q) throw UsageError("unknown state " + state_name);
        analyze_state(a, *q, sw, erasing, direction, show_tq);
      } else {
        for (auto q : a.states()) analyze_state(a, q, sw, erasing, direction, show_tq);
      }
      return kOk;
    }
    if (*oracle) {
      const auto a = load(file_a, pool);
      const auto b = load(file_b, pool);
      ltw::oracle::EnumerationBudget budget;
      budget.max_depth = depth;
      const auto v = ltw::oracle::brute_equiv(a, b, budget, jobs);
      if (v.equivalent) {
        std::cout << "equivalent up to depth " << depth << " (" << v.trees_checked << " trees"
                  << (v.truncated ? ", truncated" : "") << ")\n";
        return kOk;
      }
      std::cout << "not equivalent\n";
      std::cout << "witness: " << v.witness->to_string() << "\n";
      std::cout << "detail: " << v.detail << "\n";
      return kDifferent;
    }
  } catch (const ltw::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCap;
  } catch (const ltw::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ltw::InvalidTransducer& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ltw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
