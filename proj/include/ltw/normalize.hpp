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

// Partial normal form:
//   1. every quasi-periodic state is replaced by handle + earliest copy,
//   2. erasing calls move to the end of their rules in input order,
//   3. quasi-periodic rule parts q(x) u are made earliest, right to left,
//   4. runs of adjacent calls to states of one primitive period, with no
//      output between them, are sorted by input position.
//
// Generated states are named p__e (earliest copies, with a numeric suffix
// when taken) and p__hat (rule-part scaffolds, never left in the output).

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <tuple>
#include <vector>

#include "ltw/analysis.hpp"
#include "ltw/format.hpp"
#include "ltw/transducer.hpp"

namespace ltw::normalize {

using analysis::Direction;
using analysis::QuasiPeriodicity;

struct Action {
  enum class Kind { replace_state, erase_order, part_earliest, reorder_run, parts_pass };

  Kind kind = Kind::replace_state;
  std::string state;
  std::string symbol;
  /// 1-based call positions: the part for part_earliest, the run for
  /// reorder_run; the pass number for parts_pass.
  std::size_t first = 0;
  std::size_t last = 0;
  Direction direction = Direction::left;
  std::string handle;
  std::string period;
  std::string result;

  std::string to_string() const {
    switch (kind) {
      case Kind::replace_state:
        return "replace-state " + state + " " + analysis::to_string(direction) +
               " handle=" + handle + " period=" + period + " -> " + result;
      case Kind::erase_order:
        return "erase-order " + state + " " + symbol;
      case Kind::part_earliest:
        return "part-earliest " + state + " " + symbol + " " + std::to_string(first) +
               " handle=" + handle + " period=" + period + " -> " + result;
      case Kind::reorder_run:
        return "reorder " + state + " " + symbol + " " + std::to_string(first) + "-" +
               std::to_string(last);
      case Kind::parts_pass:
        return "parts-pass " + std::to_string(first);
    }
    return {};
  }
};

struct NormalizationReport {
  std::vector<Action> actions;
  std::vector<std::pair<std::string, double>> timings;

  std::size_t count(Action::Kind k) const {
    return static_cast<std::size_t>(std::count_if(
        actions.begin(), actions.end(), [k](const Action& a) { return a.kind == k; }));
  }

  /// One line per action; timings follow as '#' comment lines.
  std::string to_string(bool with_timings = true) const {
    std::string out;
    for (const auto& a : actions) out += a.to_string() + "\n";
    if (with_timings) {
      for (const auto& [pass, seconds] : timings) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", seconds);
        out += "# time " + pass + " " + buf + "s\n";
      }
    }
    return out;
  }
};

/// Memo tables shared by the steps of one normalization run, so that equal
/// earliest copies are built once.
struct Context {
  /// (state, direction, shift mod period length, period length) -> copy.
  std::map<std::tuple<std::string, Direction, BigInt, BigInt>, std::string> copies;

  struct Part {
    std::string state;
    WordRef word;
    std::optional<QuasiPeriodicity> verdict;
    std::string copy;
  };
  std::vector<Part> parts;
};

namespace detail {

/// Name stem of a state's earliest copy; rule-part scaffolds share the stem
/// of the state they wrap.
inline std::string copy_stem(const std::string& name) {
  static const std::regex hat("__hat[0-9]*$");
  return std::regex_replace(name, hat, "") + "__e";
}

/// Scaffold names are reused across rule parts with different words, so a
/// scaffold's copy must never come from or go into the memo.
inline bool is_scaffold(const std::string& name) {
  static const std::regex hat("__hat[0-9]*$");
  return std::regex_search(name, hat);
}

/// Left-hand earliest copy: q is deleted and every call q(x) becomes
/// handle q__e(x). Returns the transducer (untrimmed) and the copy of q.
inline std::pair<Ltw, StateId> earliest_left(const Ltw& m, StateId q, const QuasiPeriodicity& v,
                                             Context& ctx) {
  SlpPool& pool = m.pool();
  const auto sw = analysis::shortest_words(m);
  if (!sw.productive(q)) throw EmptyDomain(m.name(q));
  if (!pool.equals(sw.word[index(q)], v.handle)) {
    throw InvalidVerdict("handle of state " + m.name(q) + " is not its shortest word");
  }
  const auto shifts = analysis::mock_shift_table(m, q, sw);
  const BigInt ell = pool.length(v.period);
  const auto reach = accessible(m, q);
  Ltw out = m;
  std::map<StateId, StateId> copy;
  std::vector<StateId> fresh;
  for (StateId p : reach) {
    const BigInt offset = ell == 0 ? BigInt(0) : BigInt(shifts.at(p) % ell);
    auto key = std::make_tuple(m.name(p), v.direction, offset, ell);
    const bool memo = !is_scaffold(m.name(p));
    auto it = memo ? ctx.copies.find(key) : ctx.copies.end();
    if (it != ctx.copies.end() && out.has_state_name(it->second)) {
      copy.emplace(p, out.state(it->second));
      continue;
    }
    const StateId c = out.add_state(analysis::fresh_state_name(out, copy_stem(m.name(p))));
    if (memo) ctx.copies[key] = out.name(c);
    copy.emplace(p, c);
    fresh.push_back(p);
  }
  for (StateId p : fresh) {
    for (const auto& [f, rule] : m.rules_of(p)) {
      bool usable = true;
      for (const auto& c : rule->calls) usable = usable && sw.productive(c.state);
      if (!usable) continue;
      WordRef u = rule->words[0];
      for (std::size_t k = 0; k < rule->calls.size(); ++k) {
        u = pool.concat(u, sw.word[index(rule->calls[k].state)], rule->words[k + 1]);
      }
      Rule r;
      r.words.assign(rule->words.size(), pool.empty());
      r.words[0] = pool.rotate_left(pool.strip_prefix(u, *sw.length[index(p)]), shifts.at(p));
      for (const auto& c : rule->calls) r.calls.push_back({copy.at(c.state), c.child});
      out.set_rule(copy.at(p), f, std::move(r));
    }
  }
  const StateId qe = copy.at(q);
  std::vector<std::pair<Ltw::RuleKey, Rule>> rewritten;
  for (const auto& [key, rule] : out.rules()) {
    bool hit = false;
    Rule r = rule;
    for (std::size_t k = 0; k < r.calls.size(); ++k) {
      if (r.calls[k].state != q) continue;
      r.words[k] = pool.concat(r.words[k], v.handle);
      r.calls[k].state = qe;
      hit = true;
    }
    if (hit) rewritten.emplace_back(key, std::move(r));
  }
  for (auto& [key, r] : rewritten) out.set_rule(key.first, key.second, std::move(r));
  if (out.axiom().state == q) {
    out.set_axiom({pool.concat(out.axiom().pre, v.handle), qe, out.axiom().post});
  }
  std::vector<bool> keep(out.state_count(), true);
  keep[index(q)] = false;
  Ltw result = out.retain(keep);
  return {result, result.state(out.name(qe))};
}

inline QuasiPeriodicity mirrored(SlpPool& pool, QuasiPeriodicity v) {
  v.handle = pool.reverse(v.handle);
  v.period = pool.reverse(v.period);
  return v;
}

}  // namespace detail

/// Replaces q by its handle followed by an earliest copy;
/// copies of the states accessible from q are shared through ctx. Returns
/// the trimmed result and the name of q's copy.
inline std::pair<Ltw, std::string> make_state_earliest(const Ltw& m, StateId q,
                                                       const QuasiPeriodicity& verdict,
                                                       Context& ctx) {
  if (verdict.direction == Direction::left) {
    auto [out, qe] = detail::earliest_left(m, q, verdict, ctx);
    std::string name = out.name(qe);
    return {trim(out), name};
  }
  Ltw flipped = mirror(m);
  auto [out, qe] = detail::earliest_left(flipped, q, detail::mirrored(m.pool(), verdict), ctx);
  std::string name = out.name(qe);
  return {trim(mirror(out)), name};
}

inline Ltw make_state_earliest(const Ltw& m, StateId q, const QuasiPeriodicity& verdict) {
  Context ctx;
  return make_state_earliest(m, q, verdict, ctx).first;
}

/// States in the order in which they are tested for quasi-periodicity: a
/// state before the states it reaches, and inside a strongly connected
/// component the states farther from the axiom first.
inline std::vector<StateId> processing_order(const Ltw& m) {
  const std::size_t n = m.state_count();
  // Tarjan's algorithm, iteratively; components come out sinks first.
  std::vector<std::vector<StateId>> succ(n);
  for (const auto& [key, rule] : m.rules()) {
    for (const auto& c : rule.calls) succ[index(key.first)].push_back(c.state);
  }
  std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<StateId> stack;
  int counter = 0, components = 0;
  for (StateId root : m.states()) {
    if (idx[index(root)] >= 0) continue;
    std::vector<std::pair<StateId, std::size_t>> call{{root, 0}};
    idx[index(root)] = low[index(root)] = counter++;
    stack.push_back(root);
    on_stack[index(root)] = true;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      if (next < succ[index(v)].size()) {
        StateId w = succ[index(v)][next++];
        if (idx[index(w)] < 0) {
          idx[index(w)] = low[index(w)] = counter++;
          stack.push_back(w);
          on_stack[index(w)] = true;
          call.push_back({w, 0});
        } else if (on_stack[index(w)]) {
          low[index(v)] = std::min(low[index(v)], idx[index(w)]);
        }
        continue;
      }
      if (low[index(v)] == idx[index(v)]) {
        for (;;) {
          StateId w = stack.back();
          stack.pop_back();
          on_stack[index(w)] = false;
          comp[index(w)] = components;
          if (w == v) break;
        }
        ++components;
      }
      StateId done = v;
      call.pop_back();
      if (!call.empty()) {
        StateId parent = call.back().first;
        low[index(parent)] = std::min(low[index(parent)], low[index(done)]);
      }
    }
  }
  std::vector<std::size_t> dist(n, n);
  auto order = accessible(m, m.axiom().state);
  dist[index(order[0])] = 0;
  for (StateId p : order) {
    for (StateId c : succ[index(p)]) {
      if (dist[index(c)] == n) dist[index(c)] = dist[index(p)] + 1;
    }
  }
  std::vector<StateId> out = m.states();
  std::stable_sort(out.begin(), out.end(), [&](StateId a, StateId b) {
    // Reverse Tarjan numbering is a topological order of the components.
    if (comp[index(a)] != comp[index(b)]) return comp[index(a)] > comp[index(b)];
    return dist[index(a)] > dist[index(b)];
  });
  return out;
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline std::string quoted_word(const SlpPool& pool, WordRef w) {
  return format::describe_word(pool, w);
}

/// Applies a left-then-right quasi-periodicity test to q and, when a
/// non-earliest verdict is found, the replacement. Returns the action.
inline std::optional<Action> replace_if_quasi_periodic(Ltw& m, StateId q, Context& ctx,
                                                       std::optional<Direction> only = {}) {
  const SlpPool& pool = m.pool();
  for (Direction d : {Direction::left, Direction::right}) {
    if (only && *only != d) continue;
    auto v = analysis::quasi_periodicity(m, q, d);
    if (!v || pool.is_empty(v->handle)) continue;
    Action a;
    a.kind = Action::Kind::replace_state;
    a.state = m.name(q);
    a.direction = d;
    a.handle = quoted_word(pool, v->handle);
    a.period = quoted_word(pool, v->period);
    auto [out, copy] = make_state_earliest(m, q, *v, ctx);
    a.result = copy;
    m = std::move(out);
    return a;
  }
  return std::nullopt;
}

}  // namespace detail

/// Step 1: every quasi-periodic state ends up earliest.
inline Ltw eliminate_quasi_periodic_states(const Ltw& input, NormalizationReport& report,
                                           Context& ctx) {
  Ltw m = trim(input);
  std::vector<std::string> settled;
  for (bool changed = true; changed;) {
    changed = false;
    const auto sw = analysis::shortest_words(m);
    for (StateId q : processing_order(m)) {
      const std::string& name = m.name(q);
      if (std::find(settled.begin(), settled.end(), name) != settled.end()) continue;
      // An eps-producing quasi-periodic state has handle eps on both sides.
      if (*sw.length[index(q)] == 0) continue;
      if (auto a = detail::replace_if_quasi_periodic(m, q, ctx)) {
        report.actions.push_back(std::move(*a));
        changed = true;
        break;
      }
      settled.push_back(name);
    }
  }
  return m;
}

inline Ltw eliminate_quasi_periodic_states(const Ltw& input, NormalizationReport& report) {
  Context ctx;
  return eliminate_quasi_periodic_states(input, report, ctx);
}

namespace detail {

inline Rule erase_ordered(const Ltw& m, const Rule& rule, const std::vector<bool>& erasing) {
  SlpPool& pool = m.pool();
  Rule out;
  out.words.push_back(rule.words[0]);
  std::vector<Call> tail;
  for (std::size_t k = 0; k < rule.calls.size(); ++k) {
    if (erasing[index(rule.calls[k].state)]) {
      tail.push_back(rule.calls[k]);
      out.words.back() = pool.concat(out.words.back(), rule.words[k + 1]);
    } else {
      out.calls.push_back(rule.calls[k]);
      out.words.push_back(rule.words[k + 1]);
    }
  }
  std::stable_sort(tail.begin(), tail.end(),
                   [](const Call& a, const Call& b) { return a.child < b.child; });
  for (const auto& c : tail) {
    out.calls.push_back(c);
    out.words.push_back(pool.empty());
  }
  return out;
}

inline bool same_rule(const Rule& a, const Rule& b) { return a.calls == b.calls && a.words == b.words; }

}  // namespace detail

/// Step 2: erasing calls move to the end of each rule, sorted by input
/// position; the words after them join the word on their left.
inline Ltw erase_order(const Ltw& input, NormalizationReport& report) {
  Ltw m = input;
  const auto erasing = analysis::erasing_states(input);
  for (const auto& [key, rule] : input.rules()) {
    Rule r = detail::erase_ordered(input, rule, erasing);
    if (detail::same_rule(r, rule)) continue;
    m.set_rule(key.first, key.second, std::move(r));
    Action a;
    a.kind = Action::Kind::erase_order;
    a.state = input.name(key.first);
    a.symbol = input.alphabet().name(key.second);
    report.actions.push_back(std::move(a));
  }
  return m;
}

inline Ltw erase_order(const Ltw& input) {
  NormalizationReport ignored;
  return erase_order(input, ignored);
}

namespace detail {

/// Rules in printing order, by name, so that the scan survives renumbering.
inline std::vector<std::pair<std::string, std::string>> rule_names(const Ltw& m) {
  std::vector<std::pair<std::string, std::string>> out;
  std::vector<StateId> states = m.states();
  std::sort(states.begin(), states.end(),
            [&](StateId a, StateId b) { return m.name(a) < m.name(b); });
  for (StateId q : states) {
    for (const auto& [f, rule] : m.rules_of(q)) out.emplace_back(m.name(q), m.alphabet().name(f));
  }
  return out;
}

/// Makes the part at call position k (0-based) of rule (state, symbol)
/// earliest when it is quasi-periodic on the left with a nonempty handle.
inline std::optional<Action> make_part_earliest(Ltw& m, const std::string& state,
                                                const std::string& symbol, std::size_t k,
                                                Context& ctx) {
  SlpPool& pool = m.pool();
  const StateId p = m.state(state);
  const SymbolId f = *m.alphabet().find(symbol);
  const Rule rule = *m.rule(p, f);
  const StateId c = rule.calls[k].state;
  const WordRef u = rule.words[k + 1];
  Context::Part* memo = nullptr;
  for (auto& part : ctx.parts) {
    if (part.state == m.name(c) && pool.equals(part.word, u)) memo = &part;
  }
  if (memo != nullptr && !memo->verdict) return std::nullopt;
  Action a;
  a.kind = Action::Kind::part_earliest;
  a.state = state;
  a.symbol = symbol;
  a.first = k + 1;
  if (memo != nullptr && m.has_state_name(memo->copy)) {
    Rule r = rule;
    r.words[k] = pool.concat(r.words[k], memo->verdict->handle);
    r.calls[k].state = m.state(memo->copy);
    r.words[k + 1] = pool.empty();
    m.set_rule(p, f, std::move(r));
    a.handle = quoted_word(pool, memo->verdict->handle);
    a.period = quoted_word(pool, memo->verdict->period);
    a.result = memo->copy;
    m = trim(m);
    return a;
  }
  auto scaffold = analysis::add_hat_state(m, c, u);
  auto v = analysis::quasi_periodicity(scaffold.transducer, scaffold.hat, Direction::left);
  if (memo == nullptr) {
    ctx.parts.push_back({m.name(c), u, v, {}});
    memo = &ctx.parts.back();
  }
  if (!v || pool.is_empty(v->handle)) {
    memo->verdict.reset();
    return std::nullopt;
  }
  Ltw& h = scaffold.transducer;
  Rule r = rule;
  r.calls[k].state = scaffold.hat;
  r.words[k + 1] = pool.empty();
  h.set_rule(p, f, std::move(r));
  auto [out, copy] = make_state_earliest(h, scaffold.hat, *v, ctx);
  memo->verdict = v;
  memo->copy = copy;
  a.handle = quoted_word(pool, v->handle);
  a.period = quoted_word(pool, v->period);
  a.result = copy;
  m = std::move(out);
  return a;
}

inline bool part_is_trivial(const Ltw& m, const Rule& rule, std::size_t k,
                            const analysis::ShortestWords& sw, const std::vector<bool>& erasing) {
  const StateId c = rule.calls[k].state;
  if (erasing[index(c)]) return true;
  return m.pool().is_empty(rule.words[k + 1]) && *sw.length[index(c)] == 0;
}

}  // namespace detail

/// Step 3: every rule is scanned right to left and each quasi-periodic part
/// q(x) u is replaced by its handle and an earliest copy; scans repeat until
/// nothing changes.
inline Ltw make_rule_parts_earliest(const Ltw& input, NormalizationReport& report, Context& ctx) {
  Ltw m = input;
  constexpr std::size_t kMaxPasses = 16;
  for (std::size_t pass = 1; pass <= kMaxPasses; ++pass) {
    bool changed = false;
    const std::size_t mark = report.actions.size();
    for (const auto& [state, symbol] : detail::rule_names(m)) {
      if (!m.has_state_name(state)) continue;
      const SymbolId f = *m.alphabet().find(symbol);
      if (m.rule(m.state(state), f) == nullptr) continue;
      for (std::size_t k = m.rule(m.state(state), f)->calls.size(); k-- > 0;) {
        if (!m.has_state_name(state)) break;
        const Rule& rule = *m.rule(m.state(state), f);
        const auto sw = analysis::shortest_words(m);
        if (detail::part_is_trivial(m, rule, k, sw, analysis::erasing_states(m))) continue;
        if (auto a = detail::make_part_earliest(m, state, symbol, k, ctx)) {
          report.actions.push_back(std::move(*a));
          changed = true;
        }
      }
    }
    if (!changed) break;
    if (pass > 1) {
      Action a;
      a.kind = Action::Kind::parts_pass;
      a.first = pass;
      report.actions.insert(report.actions.begin() + static_cast<std::ptrdiff_t>(mark), a);
    }
  }
  return m;
}

inline Ltw make_rule_parts_earliest(const Ltw& input) {
  NormalizationReport ignored;
  Context ctx;
  return make_rule_parts_earliest(input, ignored, ctx);
}

namespace detail {

/// Primitive period of every non-erasing periodic state, computed lazily.
class PeriodCache {
 public:
  explicit PeriodCache(const Ltw& m) : m_(m), erasing_(analysis::erasing_states(m)) {}

  std::optional<WordRef> operator()(StateId q) {
    if (erasing_[index(q)]) return std::nullopt;
    auto it = cache_.find(q);
    if (it == cache_.end()) it = cache_.emplace(q, analysis::is_periodic_state(m_, q)).first;
    return it->second;
  }

 private:
  const Ltw& m_;
  std::vector<bool> erasing_;
  std::map<StateId, std::optional<WordRef>> cache_;
};

/// Sorts maximal runs of the rule; returns the 1-based bounds of each run
/// that changed.
inline std::vector<std::pair<std::size_t, std::size_t>> sort_runs(const Ltw& m, Rule& rule,
                                                                  PeriodCache& periods) {
  SlpPool& pool = m.pool();
  std::vector<std::pair<std::size_t, std::size_t>> changed;
  const std::size_t n = rule.calls.size();
  std::size_t i = 0;
  while (i < n) {
    auto pi = periods(rule.calls[i].state);
    std::size_t j = i;
    while (pi && j + 1 < n && pool.is_empty(rule.words[j + 1])) {
      auto next = periods(rule.calls[j + 1].state);
      if (!next || !pool.equals(*next, *pi)) break;
      ++j;
    }
    if (j > i) {
      auto begin = rule.calls.begin() + static_cast<std::ptrdiff_t>(i);
      auto end = rule.calls.begin() + static_cast<std::ptrdiff_t>(j + 1);
      auto by_child = [](const Call& a, const Call& b) { return a.child < b.child; };
      if (!std::is_sorted(begin, end, by_child)) {
        std::stable_sort(begin, end, by_child);
        changed.emplace_back(i + 1, j + 1);
      }
    }
    i = j + 1;
  }
  return changed;
}

}  // namespace detail

/// Step 4: maximal runs of adjacent calls to non-erasing states of one
/// primitive period, with eps between them, are sorted by input position.
inline Ltw reorder_periodic_runs(const Ltw& input, NormalizationReport& report) {
  Ltw m = input;
  detail::PeriodCache periods(input);
  for (const auto& [key, rule] : input.rules()) {
    Rule r = rule;
    for (auto [first, last] : detail::sort_runs(input, r, periods)) {
      Action a;
      a.kind = Action::Kind::reorder_run;
      a.state = input.name(key.first);
      a.symbol = input.alphabet().name(key.second);
      a.first = first;
      a.last = last;
      report.actions.push_back(std::move(a));
    }
    if (!detail::same_rule(r, rule)) m.set_rule(key.first, key.second, std::move(r));
  }
  return m;
}

inline Ltw reorder_periodic_runs(const Ltw& input) {
  NormalizationReport ignored;
  return reorder_periodic_runs(input, ignored);
}

struct NormalForm {
  Ltw transducer;
  NormalizationReport report;
};

/// Trims, then runs the four steps in order.
inline NormalForm partial_normal_form(const Ltw& input) {
  NormalizationReport report;
  Context ctx;
  using clock = std::chrono::steady_clock;
  auto start = clock::now();
  Ltw m = trim(input);
  report.timings.emplace_back("trim", detail::seconds_since(start));
  start = clock::now();
  m = eliminate_quasi_periodic_states(m, report, ctx);
  report.timings.emplace_back("quasi-periodic-states", detail::seconds_since(start));
  start = clock::now();
  m = erase_order(m, report);
  report.timings.emplace_back("erase-order", detail::seconds_since(start));
  start = clock::now();
  m = make_rule_parts_earliest(m, report, ctx);
  report.timings.emplace_back("rule-parts", detail::seconds_since(start));
  start = clock::now();
  m = trim(reorder_periodic_runs(m, report));
  report.timings.emplace_back("reorder-runs", detail::seconds_since(start));
  return {std::move(m), std::move(report)};
}

/// Re-applies the actions of a report to the input of the run that
/// produced it.
inline Ltw replay(const Ltw& input, const NormalizationReport& report) {
  Context ctx;
  Ltw m = trim(input);
  for (const auto& a : report.actions) {
    switch (a.kind) {
      case Action::Kind::replace_state: {
        auto done = detail::replace_if_quasi_periodic(m, m.state(a.state), ctx, a.direction);
        if (!done) throw InvalidVerdict("state " + a.state + " is not quasi-periodic");
        break;
      }
      case Action::Kind::erase_order: {
        const StateId q = m.state(a.state);
        const SymbolId f = *m.alphabet().find(a.symbol);
        Rule r = detail::erase_ordered(m, *m.rule(q, f), analysis::erasing_states(m));
        m.set_rule(q, f, std::move(r));
        break;
      }
      case Action::Kind::part_earliest:
        if (!detail::make_part_earliest(m, a.state, a.symbol, a.first - 1, ctx)) {
          throw InvalidVerdict("rule part is not quasi-periodic");
        }
        break;
      case Action::Kind::reorder_run: {
        const StateId q = m.state(a.state);
        const SymbolId f = *m.alphabet().find(a.symbol);
        Rule r = *m.rule(q, f);
        auto by_child = [](const Call& x, const Call& y) { return x.child < y.child; };
        std::stable_sort(r.calls.begin() + static_cast<std::ptrdiff_t>(a.first - 1),
                         r.calls.begin() + static_cast<std::ptrdiff_t>(a.last), by_child);
        m.set_rule(q, f, std::move(r));
        break;
      }
      case Action::Kind::parts_pass:
        break;
    }
  }
  return trim(m);
}

}  // namespace ltw::normalize
