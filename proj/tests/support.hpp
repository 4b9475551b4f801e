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

// Fixtures, random transducers and mutators shared by the test binaries.

#pragma once

#include <algorithm>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ltw/ltw.hpp"

namespace ltwtest {

inline std::string fixture_path(const std::string& name) {
  return std::string(LTW_SOURCE_DIR) + "/tests/fixtures/" + name;
}

inline std::string golden_path(const std::string& name) {
  return std::string(LTW_SOURCE_DIR) + "/tests/golden/" + name;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline ltw::Ltw load_fixture(const std::string& name,
                             std::shared_ptr<ltw::SlpPool> pool = nullptr) {
  if (!pool) pool = std::make_shared<ltw::SlpPool>();
  return ltw::format::parse_ltw(read_text(fixture_path(name)), std::move(pool));
}

/// Fixtures that every corpus test runs on.
inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"chain.ltw",  "erase_four.ltw", "reorder_a.ltw",
                                                 "reorder_b.ltw", "bca_part.ltw",       "two_loops.ltw",
                                                 "two_loops_cba.ltw"};
  return names;
}

/// Chain of k states, all quasi-periodic: q(k-1) loops on "abc", and each
/// earlier state wraps its successor so that its period is the successor's
/// period rotated by one.
inline std::string chain_text(std::size_t k) {
  std::vector<std::string> period(k);
  period[k - 1] = "abc";
  for (std::size_t i = k - 1; i-- > 0;) period[i] = period[i + 1].substr(1) + period[i + 1][0];
  std::ostringstream out;
  out << "input f:1, g:0\naxiom = q0(x)\n";
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const std::string& next = period[i + 1];
    out << "rule q" << i << " f(x1) = \"" << next.substr(1) << "\" q" << i + 1 << "(x1) \""
        << next[0] << "\"\n";
    out << "rule q" << i << " g = \"" << period[i] << "\"\n";
  }
  out << "rule q" << k - 1 << " f(x1) = \"abc\" q" << k - 1 << "(x1)\n";
  out << "rule q" << k - 1 << " g = \"abc\"\n";
  return out.str();
}

struct GenOptions {
  std::size_t max_states = 6;
  std::size_t max_word = 4;
};

/// Random trimmed transducer over h:2, f:1, g:0. Words are drawn either
/// from a per-transducer period or freely, so quasi-periodic states are
/// common.
class Generator {
 public:
  Generator(std::uint64_t seed, std::shared_ptr<ltw::SlpPool> pool, GenOptions options = {})
      : rng_(seed), pool_(std::move(pool)), options_(options) {
    alphabet_.add("h", 2);
    alphabet_.add("f", 1);
    alphabet_.add("g", 0);
  }

  std::mt19937_64& rng() { return rng_; }
  const std::shared_ptr<ltw::SlpPool>& pool() const { return pool_; }

  ltw::Ltw transducer() {
    for (;;) {
      static const char* const kPeriods[] = {"a", "ab", "abc", "aab"};
      theme_ = kPeriods[pick(4)];
      ltw::Ltw m(pool_, alphabet_);
      const std::size_t n = 1 + pick(options_.max_states);
      for (std::size_t i = 0; i < n; ++i) m.add_state("s" + std::to_string(i));
      for (std::size_t i = 0; i < n; ++i) {
        for (const auto& sym : alphabet_.symbols()) {
          const double keep = sym.arity == 0 ? 0.85 : 0.6;
          if (!chance(keep)) continue;
          set_random_rule(m, static_cast<ltw::StateId>(i), *alphabet_.find(sym.name));
        }
      }
      m.set_axiom({chance(0.7) ? pool_->empty() : word(), static_cast<ltw::StateId>(0),
                   chance(0.7) ? pool_->empty() : word()});
      try {
        return ltw::trim(m);
      } catch (const ltw::EmptyTransducer&) {
      }
    }
  }

  /// Transducer whose root calls chains of periodic states side by side,
  /// so shuffle_runs has runs to permute. One state may use a rotated
  /// period; it must never be moved across the others.
  ltw::Ltw periodic_runs_transducer() {
    static const char* const kPeriods[] = {"ab", "abc", "aab", "abcb"};
    theme_ = kPeriods[pick(4)];
    const std::string rotated = theme_.substr(1) + theme_[0];
    ltw::Ltw m(pool_, alphabet_);
    m.add_state("s0");
    const std::size_t loops = 2 + pick(4);
    for (std::size_t i = 1; i <= loops; ++i) {
      const auto p = m.add_state("p" + std::to_string(i));
      const std::string& period = (i == loops && chance(0.4)) ? rotated : theme_;
      const auto w = pool_->literal(period);
      ltw::Rule f;
      f.calls.push_back({p, 0});
      f.words = chance(0.5) ? std::vector<ltw::WordRef>{w, pool_->empty()}
                            : std::vector<ltw::WordRef>{pool_->empty(), w};
      m.set_rule(p, *alphabet_.find("f"), std::move(f));
      m.set_rule(p, *alphabet_.find("g"), ltw::Rule{{chance(0.5) ? w : pool_->empty()}, {}});
    }
    auto loop = [&] { return static_cast<ltw::StateId>(1 + pick(loops)); };
    ltw::Rule h;
    const bool swap = chance(0.5);
    h.words = {word(), pool_->empty(), word()};
    h.calls = {{loop(), swap ? 1u : 0u}, {loop(), swap ? 0u : 1u}};
    m.set_rule(static_cast<ltw::StateId>(0), *alphabet_.find("h"), std::move(h));
    m.set_rule(static_cast<ltw::StateId>(0), *alphabet_.find("f"),
               ltw::Rule{{word(), word()}, {{loop(), 0}}});
    m.set_rule(static_cast<ltw::StateId>(0), *alphabet_.find("g"), ltw::Rule{{word()}, {}});
    m.set_axiom({pool_->empty(), static_cast<ltw::StateId>(0), pool_->empty()});
    return ltw::trim(m);
  }

  /// Small random edit; the result may or may not be equivalent.
  ltw::Ltw mutate(const ltw::Ltw& m) {
    for (int attempt = 0; attempt < 32; ++attempt) {
      ltw::Ltw out = m;
      const auto& rules = m.rules();
      auto it = rules.begin();
      std::advance(it, static_cast<std::ptrdiff_t>(pick(rules.size())));
      const auto [q, f] = it->first;
      ltw::Rule r = it->second;
      switch (pick(5)) {
        case 0:
          r.words[pick(r.words.size())] = word();
          out.set_rule(q, f, r);
          break;
        case 1:
          if (r.calls.size() < 2) continue;
          std::swap(r.calls[0].child, r.calls[1].child);
          out.set_rule(q, f, r);
          break;
        case 2:
          out.erase_rule(q, f);
          break;
        case 3: {
          auto ax = m.axiom();
          ax.pre = pool_->concat(ax.pre, word());
          out.set_axiom(ax);
          break;
        }
        default:
          if (r.calls.empty()) continue;
          r.calls[pick(r.calls.size())].state =
              static_cast<ltw::StateId>(pick(m.state_count()));
          out.set_rule(q, f, r);
          break;
      }
      try {
        return ltw::trim(out);
      } catch (const ltw::EmptyTransducer&) {
      }
    }
    return m;
  }

  /// Randomly permutes runs of adjacent calls with empty words between
  /// them whose callees are periodic with one primitive period (erasing
  /// callees fit any run). Such permutations keep the transducer's meaning;
  /// the oracle still checks every pair.
  ltw::Ltw shuffle_runs(const ltw::Ltw& m) {
    std::vector<std::optional<ltw::WordRef>> root(m.state_count());
    const auto sw = ltw::analysis::shortest_words(m);
    for (std::size_t q = 0; q < m.state_count(); ++q) {
      if (sw.productive(ltw::StateId(q))) root[q] = ltw::analysis::is_periodic_state(m, ltw::StateId(q));
    }
    ltw::Ltw out = m;
    for (const auto& [key, rule] : m.rules()) {
      ltw::Rule r = rule;
      std::size_t i = 0;
      while (i < r.calls.size()) {
        std::size_t j = i + 1;
        const auto& first = root[ltw::index(r.calls[i].state)];
        if (first) {
          std::optional<ltw::WordRef> period = pool_->is_empty(*first) ? std::nullopt : first;
          while (j < r.calls.size() && pool_->is_empty(r.words[j])) {
            const auto& next = root[ltw::index(r.calls[j].state)];
            if (!next) break;
            if (!pool_->is_empty(*next)) {
              if (period && !pool_->equals(*period, *next)) break;
              period = next;
            }
            ++j;
          }
        }
        std::shuffle(r.calls.begin() + static_cast<std::ptrdiff_t>(i),
                     r.calls.begin() + static_cast<std::ptrdiff_t>(j), rng_);
        i = j;
      }
      out.set_rule(key.first, key.second, std::move(r));
    }
    return out;
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  ltw::WordRef word() {
    if (chance(0.3)) return pool_->empty();
    const std::size_t len = 1 + pick(options_.max_word);
    std::string s;
    if (chance(0.6)) {
      const std::size_t phase = pick(theme_.size());
      for (std::size_t i = 0; i < len; ++i) s += theme_[(phase + i) % theme_.size()];
    } else {
      for (std::size_t i = 0; i < len; ++i) s += static_cast<char>('a' + pick(3));
    }
    return pool_->literal(s);
  }

  void set_random_rule(ltw::Ltw& m, ltw::StateId q, ltw::SymbolId f) {
    const unsigned n = m.alphabet().arity(f);
    std::vector<std::uint32_t> children(n);
    for (unsigned i = 0; i < n; ++i) children[i] = i;
    std::shuffle(children.begin(), children.end(), rng_);
    ltw::Rule r;
    r.words.push_back(word());
    for (unsigned i = 0; i < n; ++i) {
      r.calls.push_back({static_cast<ltw::StateId>(pick(m.state_count())), children[i]});
      r.words.push_back(word());
    }
    m.set_rule(q, f, std::move(r));
  }

  std::mt19937_64 rng_;
  std::shared_ptr<ltw::SlpPool> pool_;
  GenOptions options_;
  ltw::RankedAlphabet alphabet_;
  std::string theme_ = "ab";
};

struct Pair {
  std::string kind;
  ltw::Ltw first;
  ltw::Ltw second;
};

/// Pairs built from random transducers: mutated copies, normal forms,
/// order-shuffled runs of normal forms, and mutated normal forms.
inline std::vector<Pair> random_pairs(std::uint64_t seed, std::size_t count) {
  auto pool = std::make_shared<ltw::SlpPool>();
  Generator gen(seed, pool);
  std::vector<Pair> out;
  for (std::size_t i = 0; i < count; ++i) {
    ltw::Ltw m = gen.transducer();
    switch (i % 4) {
      case 0:
        out.push_back({"mutated", m, gen.mutate(m)});
        break;
      case 1:
        out.push_back({"normal-form", m, ltw::normalize::partial_normal_form(m).transducer});
        break;
      case 2: {
        ltw::Ltw r = gen.periodic_runs_transducer();
        if (i % 8 == 6) r = ltw::normalize::partial_normal_form(r).transducer;
        out.push_back({"shuffled-runs", r, gen.shuffle_runs(r)});
        break;
      }
      default: {
        ltw::Ltw n = ltw::normalize::partial_normal_form(m).transducer;
        out.push_back({"mutated-normal-form", m, gen.mutate(n)});
        break;
      }
    }
  }
  return out;
}

/// Random transducers plus the fixtures, all in one pool.
inline std::vector<ltw::Ltw> corpus(std::uint64_t seed, std::size_t random_count,
                                    std::shared_ptr<ltw::SlpPool> pool) {
  std::vector<ltw::Ltw> out;
  for (const auto& name : fixture_names()) out.push_back(load_fixture(name, pool));
  Generator gen(seed, pool);
  for (std::size_t i = 0; i < random_count; ++i) out.push_back(gen.transducer());
  return out;
}

/// Budget for exhaustive comparisons over h:2, f:1, g:0 at depth 5, which
/// has at most 33673 trees.
inline ltw::oracle::EnumerationBudget depth5_budget() {
  ltw::oracle::EnumerationBudget b;
  b.max_depth = 5;
  b.max_trees = 40'000;
  return b;
}

}  // namespace ltwtest
