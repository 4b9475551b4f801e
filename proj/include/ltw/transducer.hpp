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

// Deterministic linear top-down tree-to-word transducers.
//
// A rule  q, f -> u0 q1(x_s1) u1 ... qn(x_sn) un  translates the children of
// an f-node in the order given by the permutation s, each exactly once. The
// axiom  u0 q(x) u1  wraps the translation of the root.

#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ltw/error.hpp"
#include "ltw/tree.hpp"
#include "ltw/word.hpp"

namespace ltw {

enum class StateId : std::uint32_t {};
enum class SymbolId : std::uint32_t {};

constexpr std::uint32_t index(StateId s) { return static_cast<std::uint32_t>(s); }
constexpr std::uint32_t index(SymbolId s) { return static_cast<std::uint32_t>(s); }

class RankedAlphabet {
 public:
  struct Symbol {
    std::string name;
    unsigned arity = 0;
  };

  /// Adds a symbol, or returns the existing one when name and arity agree.
  SymbolId add(const std::string& name, unsigned arity) {
    if (auto found = find(name)) {
      if (symbols_[index(*found)].arity != arity) {
        throw InvalidTransducer("symbol " + name + " declared with two arities");
      }
      return *found;
    }
    auto id = static_cast<SymbolId>(symbols_.size());
    symbols_.push_back({name, arity});
    by_name_.emplace(name, id);
    return id;
  }

  std::optional<SymbolId> find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(SymbolId s) const { return symbols_[index(s)].name; }
  unsigned arity(SymbolId s) const { return symbols_[index(s)].arity; }
  std::size_t size() const { return symbols_.size(); }
  const std::vector<Symbol>& symbols() const { return symbols_; }

  bool has_leaf() const {
    for (const auto& s : symbols_) {
      if (s.arity == 0) return true;
    }
    return false;
  }

  /// Symbols of this alphabet followed by the new symbols of other.
  RankedAlphabet merged(const RankedAlphabet& other) const {
    RankedAlphabet out = *this;
    for (const auto& s : other.symbols_) out.add(s.name, s.arity);
    return out;
  }

 private:
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> by_name_;
};

/// One state call q_i(x_{child+1}) of a rule; child is 0-based.
struct Call {
  StateId state{};
  std::uint32_t child = 0;

  friend bool operator==(const Call&, const Call&) = default;
};

/// Right-hand side u0 q1(x) u1 ... qn(x) un; words.size() == calls.size() + 1.
struct Rule {
  std::vector<WordRef> words;
  std::vector<Call> calls;
};

struct Axiom {
  WordRef pre;
  StateId state{};
  WordRef post;
};

class Ltw {
 public:
  using RuleKey = std::pair<StateId, SymbolId>;

  Ltw(std::shared_ptr<SlpPool> pool, RankedAlphabet alphabet)
      : pool_(std::move(pool)), alphabet_(std::move(alphabet)) {
    axiom_.pre = axiom_.post = pool_->empty();
  }

  SlpPool& pool() const { return *pool_; }
  const std::shared_ptr<SlpPool>& shared_pool() const { return pool_; }
  const RankedAlphabet& alphabet() const { return alphabet_; }
  RankedAlphabet& mutable_alphabet() { return alphabet_; }

  StateId add_state(const std::string& name) {
    if (state_index_.count(name)) throw InvalidTransducer("duplicate state " + name);
    auto id = static_cast<StateId>(states_.size());
    states_.push_back(name);
    state_index_.emplace(name, id);
    return id;
  }

  StateId state_or_add(const std::string& name) {
    if (auto s = find_state(name)) return *s;
    return add_state(name);
  }

  std::optional<StateId> find_state(std::string_view name) const {
    auto it = state_index_.find(std::string(name));
    if (it == state_index_.end()) return std::nullopt;
    return it->second;
  }

  StateId state(std::string_view name) const {
    auto s = find_state(name);
    if (!s) throw InvalidTransducer("unknown state " + std::string(name));
    return *s;
  }

  bool has_state_name(std::string_view name) const { return find_state(name).has_value(); }

  const std::string& name(StateId s) const { return states_[index(s)]; }
  std::size_t state_count() const { return states_.size(); }

  std::vector<StateId> states() const {
    std::vector<StateId> out;
    for (std::uint32_t i = 0; i < states_.size(); ++i) out.push_back(static_cast<StateId>(i));
    return out;
  }

  const Axiom& axiom() const { return axiom_; }
  void set_axiom(Axiom ax) { axiom_ = ax; }

  void set_rule(StateId q, SymbolId f, Rule rule) {
    validate(f, rule);
    rules_[{q, f}] = std::move(rule);
  }

  void erase_rule(StateId q, SymbolId f) { rules_.erase({q, f}); }

  const Rule* rule(StateId q, SymbolId f) const {
    auto it = rules_.find({q, f});
    return it == rules_.end() ? nullptr : &it->second;
  }

  const std::map<RuleKey, Rule>& rules() const { return rules_; }

  /// Rules of q in symbol declaration order.
  std::vector<std::pair<SymbolId, const Rule*>> rules_of(StateId q) const {
    std::vector<std::pair<SymbolId, const Rule*>> out;
    for (auto it = rules_.lower_bound({q, SymbolId{0}}); it != rules_.end() && it->first.first == q;
         ++it) {
      out.emplace_back(it->first.second, &it->second);
    }
    return out;
  }

  std::size_t call_site_count() const {
    std::size_t n = 1;
    for (const auto& [key, rule] : rules_) n += rule.calls.size();
    return n;
  }

  /// Copy keeping only the states with keep[q]; rules of dropped states and
  /// rules calling dropped states are deleted. The axiom state must be kept.
  Ltw retain(const std::vector<bool>& keep) const {
    if (!keep[index(axiom_.state)]) throw EmptyTransducer();
    Ltw out(pool_, alphabet_);
    std::vector<StateId> remap(states_.size());
    for (std::uint32_t i = 0; i < states_.size(); ++i) {
      if (keep[i]) remap[i] = out.add_state(states_[i]);
    }
    out.axiom_ = {axiom_.pre, remap[index(axiom_.state)], axiom_.post};
    for (const auto& [key, rule] : rules_) {
      if (!keep[index(key.first)]) continue;
      bool ok = true;
      for (const auto& c : rule.calls) ok = ok && keep[index(c.state)];
      if (!ok) continue;
      Rule copy = rule;
      for (auto& c : copy.calls) c.state = remap[index(c.state)];
      out.rules_.emplace(RuleKey{remap[index(key.first)], key.second}, std::move(copy));
    }
    return out;
  }

 private:
  void validate(SymbolId f, const Rule& rule) const {
    const unsigned n = alphabet_.arity(f);
    if (rule.calls.size() != n || rule.words.size() != n + 1) {
      throw InvalidTransducer("rule for " + alphabet_.name(f) + " does not match its arity");
    }
    std::vector<bool> seen(n, false);
    for (const auto& c : rule.calls) {
      if (c.child >= n || seen[c.child]) {
        throw InvalidTransducer("rule for " + alphabet_.name(f) +
                                " does not use its children as a permutation");
      }
      seen[c.child] = true;
      if (index(c.state) >= states_.size()) throw InvalidTransducer("rule calls an unknown state");
    }
  }

  std::shared_ptr<SlpPool> pool_;
  RankedAlphabet alphabet_;
  std::vector<std::string> states_;
  std::unordered_map<std::string, StateId> state_index_;
  Axiom axiom_;
  std::map<RuleKey, Rule> rules_;
};

namespace detail {

inline std::string child_path(const std::string& parent, std::size_t child) {
  return parent + "." + std::to_string(child + 1);
}

inline WordRef eval_state(const Ltw& m, StateId q, const Tree& t, const std::string& path) {
  auto f = m.alphabet().find(t.symbol);
  const Rule* rule = f ? m.rule(q, *f) : nullptr;
  if (rule == nullptr || t.children.size() != m.alphabet().arity(*f)) {
    throw UndefinedInput(path, m.name(q), t.symbol);
  }
  SlpPool& pool = m.pool();
  WordRef out = rule->words[0];
  for (std::size_t i = 0; i < rule->calls.size(); ++i) {
    const Call& c = rule->calls[i];
    WordRef sub = eval_state(m, c.state, t.children[c.child], child_path(path, c.child));
    out = pool.concat(out, sub, rule->words[i + 1]);
  }
  return out;
}

inline bool accepts(const Ltw& m, StateId q, const Tree& t) {
  auto f = m.alphabet().find(t.symbol);
  if (!f || t.children.size() != m.alphabet().arity(*f)) return false;
  const Rule* rule = m.rule(q, *f);
  if (rule == nullptr) return false;
  for (const auto& c : rule->calls) {
    if (!accepts(m, c.state, t.children[c.child])) return false;
  }
  return true;
}

}  // namespace detail

/// Output of state q on t, without the axiom words.
inline WordRef evaluate_state(const Ltw& m, StateId q, const Tree& t) {
  return detail::eval_state(m, q, t, "root");
}

inline WordRef evaluate(const Ltw& m, const Tree& t) {
  const Axiom& ax = m.axiom();
  return m.pool().concat(ax.pre, evaluate_state(m, ax.state, t), ax.post);
}

inline bool domain_defined(const Ltw& m, const Tree& t) {
  return detail::accepts(m, m.axiom().state, t);
}

inline bool state_accepts(const Ltw& m, StateId q, const Tree& t) {
  return detail::accepts(m, q, t);
}

/// States reachable from q through rule calls, q first, in breadth-first order.
inline std::vector<StateId> accessible(const Ltw& m, StateId q) {
  std::vector<bool> seen(m.state_count(), false);
  std::vector<StateId> order{q};
  seen[index(q)] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& [f, rule] : m.rules_of(order[i])) {
      for (const auto& c : rule->calls) {
        if (!seen[index(c.state)]) {
          seen[index(c.state)] = true;
          order.push_back(c.state);
        }
      }
    }
  }
  return order;
}

/// States with a nonempty domain (least fixpoint).
inline std::vector<bool> productive_states(const Ltw& m) {
  std::vector<bool> productive(m.state_count(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [key, rule] : m.rules()) {
      if (productive[index(key.first)]) continue;
      bool ok = true;
      for (const auto& c : rule.calls) ok = ok && productive[index(c.state)];
      if (ok) {
        productive[index(key.first)] = true;
        changed = true;
      }
    }
  }
  return productive;
}

/// Equivalent transducer whose states all have nonempty domains and are
/// accessible from the axiom.
inline Ltw trim(const Ltw& m) {
  auto productive = productive_states(m);
  if (!productive[index(m.axiom().state)]) throw EmptyTransducer();
  Ltw pruned = m.retain(productive);
  std::vector<bool> reachable(pruned.state_count(), false);
  for (StateId s : accessible(pruned, pruned.axiom().state)) reachable[index(s)] = true;
  return pruned.retain(reachable);
}

/// Transducer with axiom  eps q(x) eps  restricted to the states accessible
/// from q.
inline Ltw restrict_to(const Ltw& m, StateId q) {
  Ltw copy = m;
  copy.set_axiom({m.pool().empty(), q, m.pool().empty()});
  std::vector<bool> keep(m.state_count(), false);
  for (StateId s : accessible(m, q)) keep[index(s)] = true;
  return copy.retain(keep);
}

/// Transducer producing the reversed outputs: each rule's calls and words are
/// reversed, and each word is mirrored.
inline Ltw mirror(const Ltw& m) {
  Ltw out = m;
  SlpPool& pool = m.pool();
  const Axiom& ax = m.axiom();
  out.set_axiom({pool.reverse(ax.post), ax.state, pool.reverse(ax.pre)});
  for (const auto& [key, rule] : m.rules()) {
    Rule r;
    for (auto it = rule.words.rbegin(); it != rule.words.rend(); ++it) {
      r.words.push_back(pool.reverse(*it));
    }
    r.calls.assign(rule.calls.rbegin(), rule.calls.rend());
    out.set_rule(key.first, key.second, std::move(r));
  }
  return out;
}

}  // namespace ltw
