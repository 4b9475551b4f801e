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

// Equivalence of arbitrary transducers: trim, compare domains, normalize
// both, then require the normal forms to be same-ordered before comparing
// their outputs.

#pragma once

#include <optional>
#include <string>

#include "ltw/morphism.hpp"
#include "ltw/normalize.hpp"
#include "ltw/oracle.hpp"
#include "ltw/pairs.hpp"

namespace ltw::equivalence {

struct DecideOptions {
  MorphismOptions morphism;
  /// Depth of the brute-force search for a witness after an order mismatch.
  std::size_t witness_depth = 6;
  std::size_t witness_trees = 20'000;
  unsigned jobs = 1;
};

struct Decision {
  EquivVerdict verdict;
  /// Normal forms, present once both domains matched.
  std::optional<normalize::NormalForm> first;
  std::optional<normalize::NormalForm> second;
};

namespace detail {

inline std::optional<Ltw> trimmed(const Ltw& m) {
  try {
    return trim(m);
  } catch (const EmptyTransducer&) {
    return std::nullopt;
  }
}

inline void check_witness(const Ltw& a, const Ltw& b, const EquivVerdict& v) {
  if (v.witness && !distinguishes(a, b, *v.witness)) {
    throw Error("internal: witness " + v.witness->to_string() +
                " does not distinguish the transducers");
  }
}

}  // namespace detail

/// Full decision with the intermediate normal forms.
inline Decision decide(const Ltw& a, const Ltw& b, const DecideOptions& options = {}) {
  if (&a.pool() != &b.pool()) throw PoolMismatch();
  Decision out;
  auto ta = detail::trimmed(a);
  auto tb = detail::trimmed(b);
  if (!ta && !tb) return out;
  if (!ta || !tb) {
    const Ltw& side = ta ? *ta : *tb;
    auto tree = analysis::shortest_trees(side)[index(side.axiom().state)];
    out.verdict = EquivVerdict::no(Reason::domain_mismatch, std::move(tree),
                                   std::string("only the ") + (ta ? "first" : "second") +
                                       " transducer has a nonempty domain");
    detail::check_witness(a, b, out.verdict);
    return out;
  }
  if (auto dom = analysis::domains_equal(*ta, *tb); !dom) {
    out.verdict = EquivVerdict::no(Reason::domain_mismatch, std::move(dom.witness), dom.detail);
    detail::check_witness(a, b, out.verdict);
    return out;
  }
  out.first = normalize::partial_normal_form(*ta);
  out.second = normalize::partial_normal_form(*tb);
  const Ltw& na = out.first->transducer;
  const Ltw& nb = out.second->transducer;
  if (auto so = analysis::same_ordered(na, nb); !so) {
    const auto& mm = *so.mismatch;
    std::string where = "(" + na.name(mm.pair.first) + "," + nb.name(mm.pair.second) + ") on " +
                        mm.symbol + ": normal forms call the children in different orders";
    std::optional<Tree> witness;
    try {
      oracle::EnumerationBudget budget;
      budget.max_depth = options.witness_depth;
      budget.max_trees = options.witness_trees;
      auto brute = oracle::brute_equiv(*ta, *tb, budget, options.jobs);
      witness = std::move(brute.witness);
    } catch (const CapExceeded&) {
      // Outputs too long to compare explicitly; report without a witness.
    }
    out.verdict = EquivVerdict::no(Reason::order_mismatch, std::move(witness), where);
    detail::check_witness(a, b, out.verdict);
    return out;
  }
  out.verdict = decide_same_ordered_equiv(na, nb, options.morphism);
  detail::check_witness(a, b, out.verdict);
  return out;
}

/// Decides whether a and b define the same partial function.
inline EquivVerdict decide_equiv(const Ltw& a, const Ltw& b, const DecideOptions& options = {}) {
  return decide(a, b, options).verdict;
}

}  // namespace ltw::equivalence
