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

// Language analysis of states: shortest words, erasing states, mock shifts,
// the test transducer T^q, and (quasi-)periodicity verdicts.

#pragma once

#include <map>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ltw/morphism.hpp"
#include "ltw/pairs.hpp"
#include "ltw/transducer.hpp"

namespace ltw::analysis {

/// Minimum-length words of every state. A state's witness rule is the first
/// rule, in symbol order, that reaches the minimum once all its callees are
/// settled.
struct ShortestWords {
  std::vector<std::optional<BigInt>> length;
  std::vector<WordRef> word;
  std::vector<std::optional<SymbolId>> witness;

  bool productive(StateId q) const { return length[index(q)].has_value(); }
};

namespace detail {

struct Candidate {
  BigInt length;
  std::uint32_t state;
  std::uint32_t symbol;
  std::uint32_t position;

  bool operator>(const Candidate& o) const {
    return std::tie(length, state, symbol, position) >
           std::tie(o.length, o.state, o.symbol, o.position);
  }
};

using CandidateQueue =
    std::priority_queue<Candidate, std::vector<Candidate>, std::greater<Candidate>>;

inline BigInt word_length_sum(const Ltw& m, const Rule& r) {
  BigInt n = 0;
  for (const auto& w : r.words) n += m.pool().length(w);
  return n;
}

}  // namespace detail

inline ShortestWords shortest_words(const Ltw& m) {
  const std::size_t n = m.state_count();
  ShortestWords out{std::vector<std::optional<BigInt>>(n), std::vector<WordRef>(n, m.pool().empty()),
                    std::vector<std::optional<SymbolId>>(n)};
  // Knuth's generalization of Dijkstra's algorithm to the min-plus grammar.
  std::vector<std::pair<StateId, SymbolId>> rule_keys;
  std::vector<std::size_t> missing;
  std::vector<std::vector<std::size_t>> users(n);
  detail::CandidateQueue queue;
  auto rule_value = [&](const Rule& r) {
    BigInt v = detail::word_length_sum(m, r);
    for (const auto& c : r.calls) v += *out.length[index(c.state)];
    return v;
  };
  for (const auto& [key, rule] : m.rules()) {
    rule_keys.push_back(key);
    missing.push_back(rule.calls.size());
    for (const auto& c : rule.calls) users[index(c.state)].push_back(rule_keys.size() - 1);
    if (rule.calls.empty()) {
      queue.push({rule_value(rule), index(key.first), index(key.second), 0});
    }
  }
  SlpPool& pool = m.pool();
  while (!queue.empty()) {
    auto top = queue.top();
    queue.pop();
    if (out.length[top.state]) continue;
    const auto q = static_cast<StateId>(top.state);
    const auto f = static_cast<SymbolId>(top.symbol);
    const Rule& rule = *m.rule(q, f);
    WordRef w = rule.words[0];
    for (std::size_t i = 0; i < rule.calls.size(); ++i) {
      w = pool.concat(w, out.word[index(rule.calls[i].state)], rule.words[i + 1]);
    }
    out.length[top.state] = top.length;
    out.word[top.state] = w;
    out.witness[top.state] = f;
    for (auto r : users[top.state]) {
      if (--missing[r] > 0) continue;
      auto [p, g] = rule_keys[r];
      if (!out.length[index(p)]) queue.push({rule_value(*m.rule(p, g)), index(p), index(g), 0});
    }
  }
  return out;
}

/// A minimum-length word of L_q.
inline WordRef shortest_word(const Ltw& m, StateId q) {
  auto s = shortest_words(m);
  if (!s.productive(q)) throw EmptyDomain(m.name(q));
  return s.word[index(q)];
}

/// Minimum-length nonempty word of every state; nullopt for erasing or
/// unproductive states.
inline std::vector<std::optional<WordRef>> shortest_nonempty_words(const Ltw& m,
                                                                   const ShortestWords& sw) {
  const std::size_t n = m.state_count();
  std::vector<std::optional<WordRef>> out(n);
  std::vector<bool> settled(n, false);
  SlpPool& pool = m.pool();
  detail::CandidateQueue queue;
  // Occurrences (rule key, call position) of each state in all-epsilon rules.
  std::vector<std::vector<std::pair<Ltw::RuleKey, std::uint32_t>>> users(n);
  auto productive_rule = [&](const Rule& r) {
    for (const auto& c : r.calls) {
      if (!sw.productive(c.state)) return false;
    }
    return true;
  };
  auto rest_length = [&](const Rule& r, std::size_t skip) {
    BigInt v = 0;
    for (std::size_t k = 0; k < r.calls.size(); ++k) {
      if (k != skip) v += *sw.length[index(r.calls[k].state)];
    }
    return v;
  };
  constexpr std::uint32_t kNoPosition = 0xffffffffu;
  for (const auto& [key, rule] : m.rules()) {
    if (!productive_rule(rule)) continue;
    BigInt words = detail::word_length_sum(m, rule);
    if (words > 0) {
      queue.push({words + rest_length(rule, rule.calls.size()), index(key.first),
                  index(key.second), kNoPosition});
    } else {
      for (std::uint32_t k = 0; k < rule.calls.size(); ++k) {
        users[index(rule.calls[k].state)].push_back({key, k});
      }
    }
  }
  while (!queue.empty()) {
    auto top = queue.top();
    queue.pop();
    if (settled[top.state]) continue;
    settled[top.state] = true;
    const Rule& rule = *m.rule(static_cast<StateId>(top.state), static_cast<SymbolId>(top.symbol));
    WordRef w = rule.words[0];
    for (std::uint32_t k = 0; k < rule.calls.size(); ++k) {
      const auto c = index(rule.calls[k].state);
      w = pool.concat(w, k == top.position ? *out[c] : sw.word[c], rule.words[k + 1]);
    }
    out[top.state] = w;
    for (const auto& [key, k] : users[top.state]) {
      if (settled[index(key.first)]) continue;
      const Rule& r = *m.rule(key.first, key.second);
      queue.push({top.length + rest_length(r, k), index(key.first), index(key.second), k});
    }
  }
  return out;
}

/// States whose language is exactly {eps}; unproductive states are not
/// erasing.
inline std::vector<bool> erasing_states(const Ltw& m) {
  const auto productive = productive_states(m);
  std::vector<bool> nonerasing(m.state_count(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [key, rule] : m.rules()) {
      if (nonerasing[index(key.first)]) continue;
      bool usable = true, emits = false;
      for (const auto& c : rule.calls) {
        usable = usable && productive[index(c.state)];
        emits = emits || nonerasing[index(c.state)];
      }
      for (const auto& w : rule.words) emits = emits || !m.pool().is_empty(w);
      if (usable && emits) {
        nonerasing[index(key.first)] = true;
        changed = true;
      }
    }
  }
  std::vector<bool> out(m.state_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = productive[i] && !nonerasing[i];
  return out;
}

inline bool is_erasing(const Ltw& m, StateId q) { return erasing_states(m)[index(q)]; }

/// Mock shifts s'(q, p) for the states p accessible from q.
struct ShiftTable {
  StateId base{};
  std::map<StateId, BigInt> shift;

  const BigInt& at(StateId p) const {
    auto it = shift.find(p);
    if (it == shift.end()) throw OutOfRange("state is not accessible from the shift table base");
    return it->second;
  }
};

/// Shortest paths over the call graph, where the edge from a rule of p to
/// its i-th callee weighs |u_i w_{i+1} ... w_n u_n| with w_j a shortest word
/// of the j-th callee.
inline ShiftTable mock_shift_table(const Ltw& m, StateId q, const ShortestWords& sw) {
  ShiftTable table{q, {}};
  std::map<StateId, BigInt> tentative{{q, BigInt(0)}};
  SlpPool& pool = m.pool();
  while (!tentative.empty()) {
    auto best = tentative.begin();
    for (auto it = tentative.begin(); it != tentative.end(); ++it) {
      if (it->second < best->second) best = it;
    }
    const StateId p = best->first;
    const BigInt d = best->second;
    tentative.erase(best);
    table.shift.emplace(p, d);
    for (const auto& [f, rule] : m.rules_of(p)) {
      bool usable = true;
      for (const auto& c : rule->calls) usable = usable && sw.productive(c.state);
      if (!usable) continue;
      BigInt suffix = pool.length(rule->words.back());
      for (std::size_t k = rule->calls.size(); k-- > 0;) {
        const StateId c = rule->calls[k].state;
        if (!table.shift.count(c)) {
          BigInt candidate = d + suffix;
          auto it = tentative.find(c);
          if (it == tentative.end() || candidate < it->second) tentative[c] = candidate;
        }
        suffix += *sw.length[index(c)] + pool.length(rule->words[k]);
      }
    }
  }
  return table;
}

inline ShiftTable mock_shift_table(const Ltw& m, StateId q) {
  return mock_shift_table(m, q, shortest_words(m));
}

/// Name base + suffix, or base + suffix + "2", "3", ... when taken.
inline std::string fresh_state_name(const Ltw& m, const std::string& base) {
  if (!m.has_state_name(base)) return base;
  for (std::size_t i = 2;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!m.has_state_name(candidate)) return candidate;
  }
}

/// The test transducer T^q: one copy p__T per state p accessible from q,
/// axiom w_q q__T(x), and for each rule of p the word
/// rho_{s'(q,p)}[ |w_p|-prefix removed from u_0 w_1 u_1 ... w_n u_n ] moved in
/// front of the (unchanged) calls.
inline Ltw build_Tq(const Ltw& m, StateId q) {
  const auto sw = shortest_words(m);
  if (!sw.productive(q)) throw EmptyDomain(m.name(q));
  const auto shifts = mock_shift_table(m, q, sw);
  const auto reach = accessible(m, q);
  SlpPool& pool = m.pool();
  Ltw t(m.shared_pool(), m.alphabet());
  std::map<StateId, StateId> copy;
  for (StateId p : reach) copy.emplace(p, t.add_state(m.name(p) + "__T"));
  t.set_axiom({sw.word[index(q)], copy.at(q), pool.empty()});
  for (StateId p : reach) {
    for (const auto& [f, rule] : m.rules_of(p)) {
      bool usable = true;
      for (const auto& c : rule->calls) usable = usable && sw.productive(c.state);
      if (!usable) continue;
      WordRef u = rule->words[0];
      for (std::size_t k = 0; k < rule->calls.size(); ++k) {
        u = pool.concat(u, sw.word[index(rule->calls[k].state)], rule->words[k + 1]);
      }
      u = pool.rotate_left(pool.strip_prefix(u, *sw.length[index(p)]), shifts.at(p));
      Rule r;
      r.words.assign(rule->words.size(), pool.empty());
      r.words[0] = u;
      for (const auto& c : rule->calls) r.calls.push_back({copy.at(c.state), c.child});
      t.set_rule(copy.at(p), f, std::move(r));
    }
  }
  return t;
}

namespace detail {

/// Sufficient test for L_q in pi^*: every state accessible from q must have
/// a unique output length modulo |pi|, and every non-erasing one a unique
/// entry phase in the infinite word pi pi pi ... such that each rule word
/// matches pi at its position.
inline bool phase_check(const Ltw& m, StateId q, WordRef pi, const ShortestWords& sw,
                        const std::vector<bool>& erasing) {
  SlpPool& pool = m.pool();
  const BigInt period = pool.length(pi);
  const auto reach = accessible(m, q);
  std::map<StateId, BigInt> residue;
  for (StateId p : reach) residue[p] = *sw.length[index(p)] % period;
  for (StateId p : reach) {
    for (const auto& [f, rule] : m.rules_of(p)) {
      BigInt total = detail::word_length_sum(m, *rule);
      for (const auto& c : rule->calls) total += residue.at(c.state);
      if (total % period != residue.at(p)) return false;
    }
  }
  if (residue.at(q) != 0) return false;
  std::map<StateId, BigInt> phase{{q, BigInt(0)}};
  std::vector<StateId> work{q};
  while (!work.empty()) {
    StateId p = work.back();
    work.pop_back();
    const BigInt entry = phase.at(p);
    for (const auto& [f, rule] : m.rules_of(p)) {
      BigInt pos = entry;
      for (std::size_t k = 0;; ++k) {
        const WordRef u = rule->words[k];
        if (!pool.matches_periodic(u, pi, pos)) return false;
        pos = (pos + pool.length(u)) % period;
        if (k == rule->calls.size()) break;
        const StateId c = rule->calls[k].state;
        if (erasing[index(c)]) continue;
        auto [it, inserted] = phase.emplace(c, pos);
        if (inserted) {
          work.push_back(c);
        } else if (it->second != pos) {
          return false;
        }
        pos = (pos + residue.at(c)) % period;
      }
    }
  }
  return true;
}

/// Exact test for L_q in pi^* with pi primitive: x is a power of pi iff
/// x pi = pi x, which is a same-ordered equivalence of two copies of q.
inline bool commutes_with(const Ltw& m, StateId q, WordRef pi) {
  Ltw base = trim(restrict_to(m, q));
  const StateId root = base.axiom().state;
  SlpPool& pool = m.pool();
  Ltw right = base;
  right.set_axiom({pool.empty(), root, pi});
  Ltw left = base;
  left.set_axiom({pi, root, pool.empty()});
  return equivalence::decide_same_ordered_equiv(right, left).equivalent;
}

}  // namespace detail

/// Primitive period pi with L_q in pi^*, eps for erasing states, nullopt when
/// L_q is not periodic. A fast phase-propagation pass settles the common
/// case; when it fails, a commutation check decides.
inline std::optional<WordRef> is_periodic_state(const Ltw& m, StateId q) {
  const auto sw = shortest_words(m);
  if (!sw.productive(q)) throw EmptyDomain(m.name(q));
  const auto erasing = erasing_states(m);
  if (erasing[index(q)]) return m.pool().empty();
  const auto nonempty = shortest_nonempty_words(m, sw);
  const WordRef pi = m.pool().primitive_root(*nonempty[index(q)]);
  if (detail::phase_check(m, q, pi, sw, erasing)) return pi;
  if (detail::commutes_with(m, q, pi)) return pi;
  return std::nullopt;
}

enum class Direction { left, right };

inline const char* to_string(Direction d) { return d == Direction::left ? "left" : "right"; }

/// L in handle period^* (left) or period^* handle (right), period primitive.
struct QuasiPeriodicity {
  Direction direction = Direction::left;
  WordRef handle;
  WordRef period;

  /// Singleton or {eps} language: the period is eps.
  bool trivial(const SlpPool& pool) const { return pool.is_empty(period); }
};

namespace detail {

inline std::optional<QuasiPeriodicity> left_quasi_periodicity(const Ltw& m, StateId q) {
  Ltw restricted = trim(restrict_to(m, q));
  Ltw t = build_Tq(restricted, restricted.axiom().state);
  auto period = is_periodic_state(t, t.axiom().state);
  if (!period) return std::nullopt;
  if (!equivalence::decide_same_ordered_equiv(restricted, t).equivalent) return std::nullopt;
  return QuasiPeriodicity{Direction::left, t.axiom().pre, *period};
}

}  // namespace detail

/// q is quasi-periodic on the left iff [[M]]_q = [[T^q]]
/// and the root copy of T^q is periodic. The right direction runs on the
/// mirror image.
inline std::optional<QuasiPeriodicity> quasi_periodicity(const Ltw& m, StateId q, Direction d) {
  if (d == Direction::left) return detail::left_quasi_periodicity(m, q);
  auto v = detail::left_quasi_periodicity(mirror(m), q);
  if (!v) return std::nullopt;
  SlpPool& pool = m.pool();
  return QuasiPeriodicity{Direction::right, pool.reverse(v->handle), pool.reverse(v->period)};
}

/// Transducer extended with a state for the rule part c(x) u: a copy of
/// every rule of c with u appended. Inside the new rules, c(x) followed by a
/// word starting with u is rewritten to the new state.
struct HatState {
  Ltw transducer;
  StateId hat{};
};

inline HatState add_hat_state(const Ltw& m, StateId c, WordRef u) {
  HatState out{m, {}};
  Ltw& h = out.transducer;
  out.hat = h.add_state(fresh_state_name(m, m.name(c) + "__hat"));
  SlpPool& pool = m.pool();
  const BigInt n = pool.length(u);
  for (const auto& [f, rule] : m.rules_of(c)) {
    Rule r = *rule;
    r.words.back() = pool.concat(r.words.back(), u);
    for (std::size_t k = 0; k < r.calls.size(); ++k) {
      WordRef& after = r.words[k + 1];
      if (r.calls[k].state != c || pool.length(after) < n) continue;
      if (!pool.equals(pool.take_prefix(after, n), u)) continue;
      r.calls[k].state = out.hat;
      after = pool.strip_prefix(after, n);
    }
    h.set_rule(out.hat, f, std::move(r));
  }
  return out;
}

/// Left quasi-periodicity of L_c u for the part c(x) u at call position k
/// (0-based) of the rule (p, f).
inline std::optional<QuasiPeriodicity> rule_part_quasi_periodicity(const Ltw& m, StateId p,
                                                                   SymbolId f, std::size_t k) {
  const Rule* rule = m.rule(p, f);
  if (rule == nullptr || k >= rule->calls.size()) {
    throw OutOfRange("no call at the requested rule position");
  }
  auto scaffold = add_hat_state(m, rule->calls[k].state, rule->words[k + 1]);
  return quasi_periodicity(scaffold.transducer, scaffold.hat, Direction::left);
}

}  // namespace ltw::analysis
