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

// Brute-force ground truth: bounded tree enumeration and evaluation on
// explicit strings. Nothing here relies on word compression beyond reading
// the rule words once.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ltw/analysis.hpp"
#include "ltw/transducer.hpp"

namespace ltw::oracle {

struct EnumerationBudget {
  std::size_t max_depth = 5;
  std::size_t max_trees = 20'000;
  /// Longest explicit word; longer outputs raise CapExceeded.
  std::size_t max_word = 100'000;
};

struct Enumeration {
  std::vector<Tree> trees;
  /// Set when max_trees cut the enumeration short.
  bool truncated = false;
};

/// Total order on trees: depth, then symbol position in the alphabet, then
/// children lexicographically.
class TreeOrder {
 public:
  explicit TreeOrder(const RankedAlphabet& alphabet) {
    for (std::size_t i = 0; i < alphabet.size(); ++i) rank_.push_back(alphabet.symbols()[i].name);
  }

  int compare(const Tree& a, const Tree& b) const {
    const auto da = a.depth(), db = b.depth();
    if (da != db) return da < db ? -1 : 1;
    return compare_same_depth(a, b);
  }

  bool operator()(const Tree& a, const Tree& b) const { return compare(a, b) < 0; }

  /// Preorder (depth, rank) sequence; keys compare lexicographically
  /// exactly as the trees compare. Ranks fix arities, so no key is a
  /// proper prefix of another.
  std::vector<std::uint64_t> key(const Tree& t) const {
    std::vector<std::uint64_t> out;
    key_into(t, out);
    return out;
  }

 private:
  std::size_t key_into(const Tree& t, std::vector<std::uint64_t>& out) const {
    const std::size_t slot = out.size();
    out.push_back(0);
    std::size_t depth = 0;
    for (const auto& c : t.children) depth = std::max(depth, key_into(c, out));
    out[slot] = (static_cast<std::uint64_t>(depth + 1) << 32) | rank(t.symbol);
    return depth + 1;
  }

  int compare_same_depth(const Tree& a, const Tree& b) const {
    const auto ra = rank(a.symbol), rb = rank(b.symbol);
    if (ra != rb) return ra < rb ? -1 : 1;
    if (a.symbol != b.symbol) return a.symbol < b.symbol ? -1 : 1;
    for (std::size_t i = 0; i < std::min(a.children.size(), b.children.size()); ++i) {
      if (int c = compare(a.children[i], b.children[i]); c != 0) return c;
    }
    if (a.children.size() != b.children.size()) return a.children.size() < b.children.size() ? -1 : 1;
    return 0;
  }

  std::size_t rank(const std::string& s) const {
    // Alphabets are small; a scan beats a map here.
    return std::find(rank_.begin(), rank_.end(), s) - rank_.begin();
  }

  std::vector<std::string> rank_;
};

/// Every tree of dom(q) up to the depth bound, in TreeOrder.
inline Enumeration enumerate_trees(const Ltw& m, StateId q, const EnumerationBudget& budget) {
  const std::size_t n = m.state_count();
  Enumeration out;
  // levels[p][d-1]: trees of dom(p) of depth exactly d, sorted.
  std::vector<std::vector<std::vector<Tree>>> levels(n);
  std::vector<std::size_t> totals(n, 0);
  // Only the states reachable from q matter.
  const auto reach = accessible(m, q);
  for (std::size_t d = 1; d <= budget.max_depth; ++d) {
    for (StateId p : reach) levels[index(p)].emplace_back();
    for (StateId p : reach) {
      auto& level = levels[index(p)][d - 1];
      for (const auto& [f, rule] : m.rules_of(p)) {
        const std::size_t arity = rule->calls.size();
        if (arity == 0) {
          if (d == 1) level.emplace_back(m.alphabet().name(f));
          continue;
        }
        if (d == 1) continue;
        // Candidates per child: trees of the callee's domain below depth d.
        std::vector<std::vector<const Tree*>> cand(arity);
        std::vector<std::size_t> deepest_from(arity);
        for (const auto& c : rule->calls) {
          auto& list = cand[c.child];
          for (std::size_t e = 0; e + 1 < d; ++e) {
            if (e + 2 == d) deepest_from[c.child] = list.size();
            for (const auto& t : levels[index(c.state)][e]) list.push_back(&t);
          }
        }
        bool empty = false;
        for (const auto& list : cand) empty = empty || list.empty();
        if (empty) continue;
        std::vector<std::size_t> pick(arity, 0);
        for (;;) {
          bool deep = false;
          for (std::size_t j = 0; j < arity; ++j) deep = deep || pick[j] >= deepest_from[j];
          if (deep) {
            if (totals[index(p)] + level.size() >= budget.max_trees) {
              out.truncated = true;
              break;
            }
            Tree t(m.alphabet().name(f));
            for (std::size_t j = 0; j < arity; ++j) t.children.push_back(*cand[j][pick[j]]);
            level.push_back(std::move(t));
          }
          // The last child varies fastest, giving lexicographic order.
          std::size_t j = arity;
          while (j > 0 && ++pick[j - 1] == cand[j - 1].size()) pick[--j] = 0;
          if (j == 0) break;
        }
      }
    }
    for (StateId p : reach) totals[index(p)] += levels[index(p)][d - 1].size();
  }
  for (const auto& level : levels[index(q)]) {
    for (const auto& t : level) {
      if (out.trees.size() >= budget.max_trees) {
        out.truncated = true;
        return out;
      }
      out.trees.push_back(t);
    }
  }
  return out;
}

inline Enumeration enumerate_domain(const Ltw& m, const EnumerationBudget& budget) {
  return enumerate_trees(m, m.axiom().state, budget);
}

/// Explicit evaluation with every rule word expanded once up front. Words
/// longer than the cap are kept as lengths and throw CapExceeded when used.
class ExplicitEvaluator {
 public:
  ExplicitEvaluator(const Ltw& m, std::size_t cap) : m_(m), cap_(cap) {
    const std::size_t symbols = m.alphabet().size();
    table_.assign(m.state_count() * symbols, nullptr);
    cached_.reserve(m.rules().size());
    for (const auto& [key, rule] : m.rules()) {
      Cached c{&rule, {}};
      for (WordRef w : rule.words) c.words.push_back(word(w));
      cached_.push_back(std::move(c));
    }
    std::size_t i = 0;
    for (const auto& [key, rule] : m.rules()) {
      table_[index(key.first) * symbols + index(key.second)] = &cached_[i++];
    }
    for (std::size_t f = 0; f < symbols; ++f) symbols_.push_back(m.alphabet().name(SymbolId(f)));
    pre_ = word(m.axiom().pre);
    post_ = word(m.axiom().post);
  }

  std::optional<std::string> state_output(StateId q, const Tree& t) const {
    std::string out;
    if (!run(q, t, out)) return std::nullopt;
    return out;
  }

  std::optional<std::string> output(const Tree& t) const {
    std::string out;
    append(pre_, out);
    if (!run(m_.axiom().state, t, out)) return std::nullopt;
    append(post_, out);
    return out;
  }

 private:
  // Expanded text, or nullopt with the exact length when over the cap.
  struct Text {
    std::optional<std::string> text;
    BigInt length;
  };
  struct Cached {
    const Rule* rule;
    std::vector<Text> words;
  };

  Text word(WordRef w) const {
    const BigInt& len = m_.pool().length(w);
    if (len > cap_) return {std::nullopt, len};
    return {m_.pool().expand(w, cap_), len};
  }

  void append(const Text& w, std::string& out) const {
    if (!w.text) throw CapExceeded(w.length + out.size());
    if (w.text->size() + out.size() > cap_) throw CapExceeded(BigInt(w.text->size() + out.size()));
    out += *w.text;
  }

  bool run(StateId q, const Tree& t, std::string& out) const {
    auto f = symbol(t.symbol);
    if (!f || m_.alphabet().arity(*f) != t.children.size()) return false;
    const Cached* c = table_[index(q) * m_.alphabet().size() + index(*f)];
    if (c == nullptr) return false;
    append(c->words[0], out);
    for (std::size_t k = 0; k < c->rule->calls.size(); ++k) {
      const Call& call = c->rule->calls[k];
      if (!run(call.state, t.children[call.child], out)) return false;
      append(c->words[k + 1], out);
    }
    return true;
  }

  std::optional<SymbolId> symbol(const std::string& name) const {
    auto it = std::find(symbols_.begin(), symbols_.end(), name);
    if (it == symbols_.end()) return std::nullopt;
    return SymbolId(it - symbols_.begin());
  }

  const Ltw& m_;
  std::size_t cap_;
  std::vector<Cached> cached_;
  std::vector<const Cached*> table_;
  Text pre_, post_;
  std::vector<std::string> symbols_;
};

/// Output of state q on t as an explicit string; nullopt when undefined.
inline std::optional<std::string> explicit_output(const Ltw& m, StateId q, const Tree& t,
                                                  std::size_t cap) {
  return ExplicitEvaluator(m, cap).state_output(q, t);
}

inline std::optional<std::string> explicit_output(const Ltw& m, const Tree& t, std::size_t cap) {
  return ExplicitEvaluator(m, cap).output(t);
}

struct BruteVerdict {
  bool equivalent = true;
  std::optional<Tree> witness;
  std::string detail;
  std::size_t trees_checked = 0;
  bool truncated = false;
};

/// Compares definedness and explicit outputs on every tree of either
/// domain within the budget; the witness is the first difference in
/// TreeOrder over the joint alphabet.
inline BruteVerdict brute_equiv(const Ltw& m1, const Ltw& m2, const EnumerationBudget& budget,
                                unsigned jobs = 1) {
  auto e1 = enumerate_domain(m1, budget);
  auto e2 = enumerate_domain(m2, budget);
  TreeOrder order(m1.alphabet().merged(m2.alphabet()));
  std::vector<std::pair<std::vector<std::uint64_t>, const Tree*>> keyed;
  for (const auto* e : {&e1, &e2}) {
    for (const auto& t : e->trees) keyed.emplace_back(order.key(t), &t);
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  std::vector<const Tree*> trees;
  trees.reserve(keyed.size());
  for (const auto& [k, t] : keyed) trees.push_back(t);

  std::vector<std::string> why(trees.size());
  const ExplicitEvaluator eval1(m1, budget.max_word), eval2(m2, budget.max_word);
  auto check = [&](std::size_t i) {
    auto o1 = eval1.output(*trees[i]);
    auto o2 = eval2.output(*trees[i]);
    if (o1.has_value() != o2.has_value()) {
      why[i] = std::string("only the ") + (o1 ? "first" : "second") + " transducer accepts";
    } else if (o1 && *o1 != *o2) {
      why[i] = "outputs \"" + *o1 + "\" and \"" + *o2 + "\" differ";
    }
  };
  jobs = std::max(1u, jobs);
  if (jobs == 1 || trees.size() < 64) {
    for (std::size_t i = 0; i < trees.size(); ++i) check(i);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < trees.size(); i += jobs) check(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  BruteVerdict v;
  v.trees_checked = trees.size();
  v.truncated = e1.truncated || e2.truncated;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (why[i].empty()) continue;
    v.equivalent = false;
    v.witness = *trees[i];
    v.detail = why[i];
    break;
  }
  return v;
}

struct BrutePeriodicity {
  std::string handle;
  std::string period;
};

/// Smallest r with s = r^k; s must be nonempty.
inline std::string primitive_root(const std::string& s) {
  for (std::size_t p = 1; p < s.size(); ++p) {
    if (s.size() % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < s.size() && ok; ++i) ok = s[i] == s[i - p];
    if (ok) return s.substr(0, p);
  }
  return s;
}

/// Handle/period reading of a finite sample: the handle is the unique
/// shortest word, the period the primitive root of what follows the handle
/// in a second-shortest word, and every sample word must lie in
/// handle period^* (left) or period^* handle (right). Success is evidence
/// only, since the sample is finite.
inline std::optional<BrutePeriodicity> brute_quasi_periodic(std::vector<std::string> words,
                                                            analysis::Direction d) {
  if (words.empty()) return std::nullopt;
  if (d == analysis::Direction::right) {
    for (auto& w : words) std::reverse(w.begin(), w.end());
    auto v = brute_quasi_periodic(std::move(words), analysis::Direction::left);
    if (v) {
      std::reverse(v->handle.begin(), v->handle.end());
      std::reverse(v->period.begin(), v->period.end());
    }
    return v;
  }
  std::sort(words.begin(), words.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  words.erase(std::unique(words.begin(), words.end()), words.end());
  const std::string handle = words[0];
  if (words.size() > 1 && words[1].size() == handle.size()) return std::nullopt;
  for (const auto& w : words) {
    if (w.compare(0, handle.size(), handle) != 0) return std::nullopt;
  }
  BrutePeriodicity out{handle, ""};
  if (words.size() == 1) return out;
  out.period = primitive_root(words[1].substr(handle.size()));
  const std::size_t p = out.period.size();
  for (const auto& w : words) {
    if ((w.size() - handle.size()) % p != 0) return std::nullopt;
    for (std::size_t i = handle.size(); i < w.size(); ++i) {
      if (w[i] != out.period[(i - handle.size()) % p]) return std::nullopt;
    }
  }
  return out;
}

/// Explicit outputs of state q on its enumerated domain.
inline std::vector<std::string> sample_language(const Ltw& m, StateId q,
                                                const EnumerationBudget& budget) {
  std::vector<std::string> out;
  const ExplicitEvaluator eval(m, budget.max_word);
  for (const auto& t : enumerate_trees(m, q, budget).trees) {
    out.push_back(*eval.state_output(q, t));
  }
  return out;
}

}  // namespace ltw::oracle
