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

// Runs of two transducers over the same input: co-reachable state pairs,
// permutation agreement and domain agreement.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ltw/transducer.hpp"

namespace ltw::analysis {

using StatePair = std::pair<StateId, StateId>;

/// Depth-minimal tree of every state's domain (nullopt when empty); ties are
/// broken by symbol declaration order.
inline std::vector<std::optional<Tree>> shortest_trees(const Ltw& m) {
  std::vector<std::optional<Tree>> out(m.state_count());
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::optional<Tree>> next = out;
    for (StateId q : m.states()) {
      if (out[index(q)]) continue;
      for (const auto& [f, rule] : m.rules_of(q)) {
        bool ready = true;
        for (const auto& c : rule->calls) ready = ready && out[index(c.state)].has_value();
        if (!ready) continue;
        Tree t(m.alphabet().name(f), std::vector<Tree>(rule->calls.size()));
        for (const auto& c : rule->calls) t.children[c.child] = *out[index(c.state)];
        next[index(q)] = std::move(t);
        changed = true;
        break;
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Co-reachable pairs in breadth-first order from the axiom pair, with the
/// step that first reached each pair.
struct PairGraph {
  struct Step {
    std::uint32_t parent = 0;
    std::string symbol;
    std::uint32_t child = 0;
  };

  std::vector<StatePair> pairs;
  std::vector<std::optional<Step>> reached_by;
  std::map<StatePair, std::uint32_t> index_of;
};

namespace detail {

/// Symbol names of both alphabets, first transducer's order first.
inline std::vector<std::string> joint_symbols(const Ltw& a, const Ltw& b) {
  std::vector<std::string> out;
  const RankedAlphabet joint = a.alphabet().merged(b.alphabet());
  for (const auto& s : joint.symbols()) out.push_back(s.name);
  return out;
}

inline const Rule* rule_by_name(const Ltw& m, StateId q, const std::string& symbol) {
  auto f = m.alphabet().find(symbol);
  return f ? m.rule(q, *f) : nullptr;
}

}  // namespace detail

inline PairGraph pair_graph(const Ltw& m1, const Ltw& m2) {
  PairGraph g;
  auto visit = [&g](StatePair p, std::optional<PairGraph::Step> step) {
    if (g.index_of.count(p)) return;
    g.index_of.emplace(p, static_cast<std::uint32_t>(g.pairs.size()));
    g.pairs.push_back(p);
    g.reached_by.push_back(std::move(step));
  };
  visit({m1.axiom().state, m2.axiom().state}, std::nullopt);
  const auto symbols = detail::joint_symbols(m1, m2);
  for (std::uint32_t i = 0; i < g.pairs.size(); ++i) {
    auto [p1, p2] = g.pairs[i];
    for (const auto& f : symbols) {
      const Rule* r1 = detail::rule_by_name(m1, p1, f);
      const Rule* r2 = detail::rule_by_name(m2, p2, f);
      if (r1 == nullptr || r2 == nullptr) continue;
      if (r1->calls.size() != r2->calls.size()) {
        throw InvalidTransducer("symbol " + f + " has different arities in the two transducers");
      }
      for (const auto& c1 : r1->calls) {
        for (const auto& c2 : r2->calls) {
          if (c1.child == c2.child) {
            visit({c1.state, c2.state}, PairGraph::Step{i, f, c1.child});
          }
        }
      }
    }
  }
  return g;
}

inline std::vector<StatePair> co_reachable_pairs(const Ltw& m1, const Ltw& m2) {
  return pair_graph(m1, m2).pairs;
}

struct OrderMismatch {
  StatePair pair;
  std::string symbol;
};

struct SameOrderedResult {
  bool same_ordered = true;
  std::optional<OrderMismatch> mismatch;

  explicit operator bool() const { return same_ordered; }
};

inline SameOrderedResult same_ordered(const Ltw& m1, const Ltw& m2) {
  const auto g = pair_graph(m1, m2);
  const auto symbols = detail::joint_symbols(m1, m2);
  for (const auto& [p1, p2] : g.pairs) {
    for (const auto& f : symbols) {
      const Rule* r1 = detail::rule_by_name(m1, p1, f);
      const Rule* r2 = detail::rule_by_name(m2, p2, f);
      if (r1 == nullptr || r2 == nullptr) continue;
      for (std::size_t i = 0; i < r1->calls.size(); ++i) {
        if (r1->calls[i].child != r2->calls[i].child) {
          return {false, OrderMismatch{{p1, p2}, f}};
        }
      }
    }
  }
  return {};
}

struct DomainCheck {
  bool equal = true;
  std::optional<Tree> witness;
  std::string detail;

  explicit operator bool() const { return equal; }
};

/// Compares the domains of two trimmed transducers. On a mismatch the
/// witness is accepted by exactly one of them.
inline DomainCheck domains_equal(const Ltw& m1, const Ltw& m2) {
  const auto g = pair_graph(m1, m2);
  const auto symbols = detail::joint_symbols(m1, m2);
  const auto trees1 = shortest_trees(m1);
  const auto trees2 = shortest_trees(m2);
  for (std::uint32_t i = 0; i < g.pairs.size(); ++i) {
    auto [p1, p2] = g.pairs[i];
    for (const auto& f : symbols) {
      const Rule* r1 = detail::rule_by_name(m1, p1, f);
      const Rule* r2 = detail::rule_by_name(m2, p2, f);
      if ((r1 == nullptr) == (r2 == nullptr)) continue;
      // Fill every hole from the side that has the rule, so that side accepts.
      const bool first = r1 != nullptr;
      const Ltw& side = first ? m1 : m2;
      const auto& trees = first ? trees1 : trees2;
      const Rule* rule = first ? r1 : r2;
      Tree hole(f, std::vector<Tree>(rule->calls.size()));
      for (const auto& c : rule->calls) hole.children[c.child] = *trees[index(c.state)];
      std::uint32_t at = i;
      while (g.reached_by[at]) {
        const auto& step = *g.reached_by[at];
        StateId parent = first ? g.pairs[step.parent].first : g.pairs[step.parent].second;
        const Rule* pr = detail::rule_by_name(side, parent, step.symbol);
        Tree up(step.symbol, std::vector<Tree>(pr->calls.size()));
        for (const auto& c : pr->calls) {
          up.children[c.child] = c.child == step.child ? std::move(hole) : *trees[index(c.state)];
        }
        hole = std::move(up);
        at = step.parent;
      }
      DomainCheck out;
      out.equal = false;
      out.witness = std::move(hole);
      out.detail = "(" + m1.name(p1) + "," + m2.name(p2) + ") on " + f + ": only the " +
                   (first ? "first" : "second") + " transducer has a rule";
      return out;
    }
  }
  return {};
}

}  // namespace ltw::analysis
