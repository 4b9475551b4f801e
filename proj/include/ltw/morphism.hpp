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

// Equivalence of same-ordered transducers.
//
// Two same-ordered transducers run in lockstep over every input: their
// aligned runs form a context-free grammar whose nonterminals are co-reachable
// state pairs. Each production carries the words of both rules, and the
// transducers are equivalent iff the two resulting morphisms agree on every
// derivation.
//
// Morphism agreement is checked in two stages. First a bounded enumeration of
// shallow derivations compares both images exactly through the word pool.
// Then a linear-algebra closure decides agreement on all derivations: a word
// w is mapped to the 2x2 matrix [[B^|w|, 0], [h(w), 1]] over a fingerprint
// lane, so concatenation becomes matrix product. A derivation maps to the
// block-diagonal pair of matrices of its two images, a 5-dimensional vector.
// The span of these vectors per nonterminal is closed under the productions
// in at most 5 insertions per nonterminal, and because the product is
// multilinear the span of the start symbol is generated by products of basis
// derivations. Agreement is a linear condition, so it suffices to test the
// basis. Every basis vector is the image of a concrete derivation, hence a
// violation always comes with a counterexample whose words differ. Agreement
// can be wrong only if the random base is a root of the difference
// polynomial of a differing derivation in every lane.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltw/pairs.hpp"
#include "ltw/transducer.hpp"

namespace ltw::equivalence {

using analysis::StatePair;

struct ProductGrammar {
  struct Production {
    std::uint32_t lhs = 0;
    /// Input symbol; empty for the start production.
    std::string symbol;
    std::vector<WordRef> left_words;
    std::vector<WordRef> right_words;
    std::vector<std::uint32_t> children;
    /// Input child of each nonterminal position (0-based).
    std::vector<std::uint32_t> child_index;
  };

  std::shared_ptr<SlpPool> pool;
  /// Nonterminals; the start nonterminal is the last one and has no pair.
  std::vector<StatePair> pairs;
  std::uint32_t start = 0;
  std::vector<Production> productions;

  std::size_t nonterminal_count() const { return pairs.size() + 1; }
};

/// Aligned-run grammar of two same-ordered transducers with equal domains.
/// The axiom words are folded into the start production.
inline ProductGrammar build_product_grammar(const Ltw& m1, const Ltw& m2) {
  if (!analysis::same_ordered(m1, m2)) throw NotSameOrdered();
  if (!analysis::domains_equal(m1, m2)) throw DomainMismatch();
  if (m1.shared_pool() != m2.shared_pool()) throw PoolMismatch();
  const auto graph = analysis::pair_graph(m1, m2);
  const auto symbols = analysis::detail::joint_symbols(m1, m2);
  ProductGrammar g;
  g.pool = m1.shared_pool();
  g.pairs = graph.pairs;
  g.start = static_cast<std::uint32_t>(g.pairs.size());
  for (std::uint32_t i = 0; i < g.pairs.size(); ++i) {
    auto [p1, p2] = g.pairs[i];
    for (const auto& f : symbols) {
      const Rule* r1 = analysis::detail::rule_by_name(m1, p1, f);
      const Rule* r2 = analysis::detail::rule_by_name(m2, p2, f);
      if (r1 == nullptr || r2 == nullptr) continue;
      ProductGrammar::Production p;
      p.lhs = i;
      p.symbol = f;
      p.left_words = r1->words;
      p.right_words = r2->words;
      for (std::size_t k = 0; k < r1->calls.size(); ++k) {
        p.children.push_back(graph.index_of.at({r1->calls[k].state, r2->calls[k].state}));
        p.child_index.push_back(r1->calls[k].child);
      }
      g.productions.push_back(std::move(p));
    }
  }
  ProductGrammar::Production start;
  start.lhs = g.start;
  start.left_words = {m1.axiom().pre, m1.axiom().post};
  start.right_words = {m2.axiom().pre, m2.axiom().post};
  start.children = {0};
  start.child_index = {0};
  g.productions.push_back(std::move(start));
  return g;
}

/// A derivation DAG; node children follow the production's positions.
struct Derivation {
  struct Node {
    std::uint32_t production = 0;
    std::vector<std::uint32_t> children;
  };

  std::vector<Node> nodes;
  std::uint32_t root = 0;
};

namespace detail {

struct DerivationImages {
  WordRef left;
  WordRef right;
};

inline DerivationImages images(const ProductGrammar& g, const Derivation& d, std::uint32_t node,
                               std::map<std::uint32_t, DerivationImages>& memo) {
  if (auto it = memo.find(node); it != memo.end()) return it->second;
  SlpPool& pool = *g.pool;
  const auto& n = d.nodes[node];
  const auto& p = g.productions[n.production];
  DerivationImages out{p.left_words[0], p.right_words[0]};
  for (std::size_t k = 0; k < n.children.size(); ++k) {
    auto sub = images(g, d, n.children[k], memo);
    out.left = pool.concat(out.left, sub.left, p.left_words[k + 1]);
    out.right = pool.concat(out.right, sub.right, p.right_words[k + 1]);
  }
  memo.emplace(node, out);
  return out;
}

inline Tree to_tree(const ProductGrammar& g, const Derivation& d, std::uint32_t node) {
  const auto& n = d.nodes[node];
  const auto& p = g.productions[n.production];
  Tree t(p.symbol, std::vector<Tree>(n.children.size()));
  for (std::size_t k = 0; k < n.children.size(); ++k) {
    t.children[p.child_index[k]] = to_tree(g, d, n.children[k]);
  }
  return t;
}

}  // namespace detail

/// Both images of a derivation.
inline std::pair<WordRef, WordRef> derivation_images(const ProductGrammar& g, const Derivation& d) {
  std::map<std::uint32_t, detail::DerivationImages> memo;
  auto im = detail::images(g, d, d.root, memo);
  return {im.left, im.right};
}

/// Node count of the input tree of a derivation, saturating at limit.
inline std::uint64_t derivation_tree_size(const Derivation& d, std::uint64_t limit) {
  std::vector<std::uint64_t> size(d.nodes.size(), 0);
  // Children always precede their parents in the node table.
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    std::uint64_t n = 1;
    for (auto c : d.nodes[i].children) n = std::min(limit, n + size[c]);
    size[i] = n;
  }
  return size[d.root];
}

/// Input tree of a derivation from the start nonterminal.
inline Tree derivation_tree(const ProductGrammar& g, const Derivation& d) {
  const auto& root = d.nodes[d.root];
  if (g.productions[root.production].lhs == g.start) return detail::to_tree(g, d, root.children[0]);
  return detail::to_tree(g, d, d.root);
}

struct MorphismOptions {
  /// Depth of the exhaustive exact stage (start production counts as 1).
  std::size_t bounded_depth = 4;
  /// Per-nonterminal cap on derivations kept by the exact stage.
  std::size_t bounded_width = 16;
};

struct MorphismResult {
  bool equal = true;
  std::optional<Derivation> counterexample;
  /// "bounded" or "span": the stage that produced the verdict.
  std::string method;
};

namespace detail {

using Vec = std::array<std::uint64_t, 5>;

inline Vec word_pair(const SlpPool& pool, WordRef u, WordRef v, std::size_t lane) {
  const auto& fu = pool.fingerprint(u);
  const auto& fv = pool.fingerprint(v);
  return {fu.power[lane], fu.hash[lane], fv.power[lane], fv.hash[lane], 1};
}

inline Vec multiply(const Vec& x, const Vec& y, std::uint64_t m) {
  using namespace modular;
  return {mul(x[0], y[0], m), add(mul(x[1], y[0], m), mul(x[4], y[1], m), m), mul(x[2], y[2], m),
          add(mul(x[3], y[2], m), mul(x[4], y[3], m), m), mul(x[4], y[4], m)};
}

/// Incrementally maintained row-echelon basis over GF(m).
class Span {
 public:
  explicit Span(std::uint64_t m) : m_(m) {}

  /// Adds v when independent; returns whether it was added.
  bool insert(const Vec& v) {
    Vec r = reduce(v);
    std::size_t pivot = 0;
    while (pivot < r.size() && r[pivot] == 0) ++pivot;
    if (pivot == r.size()) return false;
    std::uint64_t inv = modular::inverse(r[pivot], m_);
    for (auto& x : r) x = modular::mul(x, inv, m_);
    rows_.push_back({pivot, r});
    return true;
  }

 private:
  Vec reduce(Vec v) const {
    for (const auto& [pivot, row] : rows_) {
      if (v[pivot] == 0) continue;
      std::uint64_t c = v[pivot];
      for (std::size_t k = 0; k < v.size(); ++k) {
        v[k] = modular::sub(v[k], modular::mul(c, row[k], m_), m_);
      }
    }
    return v;
  }

  std::uint64_t m_;
  std::vector<std::pair<std::size_t, Vec>> rows_;
};

// Calls visit(pick) for every tuple with pick[k] < counts[k] and, unless
// from is empty, pick[k] >= from[k] for at least one k. Stops when visit
// returns false.
template <class Visit>
bool for_each_tuple(const std::vector<std::size_t>& counts, const std::vector<std::size_t>& from,
                    Visit&& visit) {
  for (auto c : counts) {
    if (c == 0) return true;
  }
  std::vector<std::size_t> pick(counts.size(), 0);
  for (;;) {
    bool fresh = from.empty();
    for (std::size_t k = 0; k < pick.size() && !fresh; ++k) fresh = pick[k] >= from[k];
    if (fresh && !visit(pick)) return false;
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == counts[k]) pick[k++] = 0;
    if (k == pick.size()) return true;
  }
}

inline MorphismResult span_check(const ProductGrammar& g, std::size_t lane) {
  const SlpPool& pool = *g.pool;
  const std::uint64_t m = pool.lanes()[lane].modulus;
  struct Generator {
    Vec vec;
    std::uint32_t derivation;
  };
  std::vector<Span> spans(g.nonterminal_count(), Span(m));
  std::vector<std::vector<Generator>> gens(g.nonterminal_count());
  Derivation dag;

  std::vector<std::vector<Vec>> word_vecs(g.productions.size());
  for (std::size_t p = 0; p < g.productions.size(); ++p) {
    const auto& prod = g.productions[p];
    for (std::size_t k = 0; k < prod.left_words.size(); ++k) {
      word_vecs[p].push_back(word_pair(pool, prod.left_words[k], prod.right_words[k], lane));
    }
  }

  // Generator counts per child already combined, per production.
  std::vector<std::optional<std::vector<std::size_t>>> done(g.productions.size());
  std::optional<std::uint32_t> violation;
  for (bool changed = true; changed && !violation;) {
    changed = false;
    for (std::size_t p = 0; p < g.productions.size() && !violation; ++p) {
      const auto& prod = g.productions[p];
      std::vector<std::size_t> counts;
      for (auto c : prod.children) counts.push_back(gens[c].size());
      if (done[p] && *done[p] == counts) continue;
      const std::vector<std::size_t> from = done[p] ? *done[p] : std::vector<std::size_t>{};
      for_each_tuple(counts, from, [&](const std::vector<std::size_t>& pick) {
        Vec v = word_vecs[p][0];
        for (std::size_t k = 0; k < pick.size(); ++k) {
          v = multiply(v, gens[prod.children[k]][pick[k]].vec, m);
          v = multiply(v, word_vecs[p][k + 1], m);
        }
        if (!spans[prod.lhs].insert(v)) return true;
        Derivation::Node node{static_cast<std::uint32_t>(p), {}};
        for (std::size_t k = 0; k < pick.size(); ++k) {
          node.children.push_back(gens[prod.children[k]][pick[k]].derivation);
        }
        dag.nodes.push_back(std::move(node));
        const auto id = static_cast<std::uint32_t>(dag.nodes.size() - 1);
        gens[prod.lhs].push_back({v, id});
        changed = true;
        if (prod.lhs == g.start && (v[0] != v[2] || v[1] != v[3])) {
          violation = id;
          return false;
        }
        return true;
      });
      bool ready = true;
      for (auto c : counts) ready = ready && c > 0;
      if (ready) done[p] = counts;
    }
  }
  if (violation) {
    dag.root = *violation;
    return {false, std::move(dag), "span"};
  }
  return {true, std::nullopt, "span"};
}

inline MorphismResult bounded_check(const ProductGrammar& g, const MorphismOptions& opt) {
  Derivation dag;
  std::vector<std::vector<std::uint32_t>> all(g.nonterminal_count());
  // Derivations added in the previous round start at from[a].
  std::vector<std::size_t> from(g.nonterminal_count(), 0);
  std::map<std::uint32_t, DerivationImages> memo;
  std::optional<std::uint32_t> violation;
  for (std::size_t depth = 1; depth <= opt.bounded_depth && !violation; ++depth) {
    std::vector<std::vector<std::uint32_t>> added(g.nonterminal_count());
    for (std::size_t p = 0; p < g.productions.size() && !violation; ++p) {
      const auto& prod = g.productions[p];
      std::vector<std::size_t> counts, starts;
      for (auto c : prod.children) {
        counts.push_back(all[c].size());
        starts.push_back(from[c]);
      }
      // Nullary productions only contribute in the first round.
      if (prod.children.empty() && depth > 1) continue;
      for_each_tuple(counts, prod.children.empty() ? std::vector<std::size_t>{} : starts,
                     [&](const std::vector<std::size_t>& pick) {
                       if (added[prod.lhs].size() >= opt.bounded_width) return false;
                       Derivation::Node node{static_cast<std::uint32_t>(p), {}};
                       for (std::size_t k = 0; k < pick.size(); ++k) {
                         node.children.push_back(all[prod.children[k]][pick[k]]);
                       }
                       dag.nodes.push_back(std::move(node));
                       const auto id = static_cast<std::uint32_t>(dag.nodes.size() - 1);
                       added[prod.lhs].push_back(id);
                       if (prod.lhs == g.start) {
                         auto im = images(g, dag, id, memo);
                         if (!g.pool->equals(im.left, im.right)) {
                           violation = id;
                           return false;
                         }
                       }
                       return true;
                     });
    }
    for (std::size_t a = 0; a < all.size(); ++a) {
      from[a] = all[a].size();
      all[a].insert(all[a].end(), added[a].begin(), added[a].end());
    }
  }
  if (violation) {
    dag.root = *violation;
    return {false, std::move(dag), "bounded"};
  }
  return {true, std::nullopt, "bounded"};
}
}  // namespace detail

inline MorphismResult morphism_equivalence(const ProductGrammar& g,
                                           const MorphismOptions& options = {}) {
  if (auto r = detail::bounded_check(g, options); !r.equal) return r;
  for (std::size_t lane = 0; lane < kLanes; ++lane) {
    if (auto r = detail::span_check(g, lane); !r.equal) return r;
  }
  return {true, std::nullopt, "span"};
}

enum class Reason { domain_mismatch, order_mismatch, output_mismatch };

inline const char* to_string(Reason r) {
  switch (r) {
    case Reason::domain_mismatch:
      return "domain-mismatch";
    case Reason::order_mismatch:
      return "order-mismatch";
    case Reason::output_mismatch:
      return "output-mismatch";
  }
  return "?";
}

struct EquivVerdict {
  bool equivalent = true;
  Reason reason = Reason::output_mismatch;
  std::optional<Tree> witness;
  std::string detail;

  static EquivVerdict yes() { return {}; }
  static EquivVerdict no(Reason r, std::optional<Tree> w, std::string d) {
    return {false, r, std::move(w), std::move(d)};
  }
};

/// True when exactly one transducer accepts t, or both do with different
/// outputs.
inline bool distinguishes(const Ltw& m1, const Ltw& m2, const Tree& t) {
  const bool d1 = domain_defined(m1, t);
  const bool d2 = domain_defined(m2, t);
  if (d1 != d2) return true;
  if (!d1) return false;
  return !m1.pool().equals(evaluate(m1, t), evaluate(m2, t));
}

/// Decides equivalence of two trimmed same-ordered transducers sharing a
/// word pool.
inline EquivVerdict decide_same_ordered_equiv(const Ltw& m1, const Ltw& m2,
                                              const MorphismOptions& options = {}) {
  if (auto dom = analysis::domains_equal(m1, m2); !dom) {
    return EquivVerdict::no(Reason::domain_mismatch, std::move(dom.witness), dom.detail);
  }
  if (!analysis::same_ordered(m1, m2)) throw NotSameOrdered();
  const auto g = build_product_grammar(m1, m2);
  auto result = morphism_equivalence(g, options);
  if (result.equal) return EquivVerdict::yes();
  constexpr std::uint64_t kMaxWitnessNodes = 1'000'000;
  if (derivation_tree_size(*result.counterexample, kMaxWitnessNodes) >= kMaxWitnessNodes) {
    return EquivVerdict::no(Reason::output_mismatch, std::nullopt,
                            "outputs differ (" + result.method +
                                " stage); the witness tree is too large to print");
  }
  Tree witness = derivation_tree(g, *result.counterexample);
  if (!distinguishes(m1, m2, witness)) {
    throw Error("internal: morphism counterexample does not distinguish the transducers");
  }
  return EquivVerdict::no(Reason::output_mismatch, std::move(witness),
                          "outputs differ (" + result.method + " stage)");
}

}  // namespace ltw::equivalence
