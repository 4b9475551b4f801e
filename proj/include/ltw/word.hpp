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

// Grammar-compressed words.
//
// Every output word handled by the library is a node of an SlpPool: a
// straight-line program whose productions are a symbol, the empty word, or
// the concatenation of two earlier nodes. Lengths are exact big integers, so
// a chain of n doublings denotes a word of length 2^n in n+1 nodes.
//
// Equality is decided with two independent Karp-Rabin fingerprints, each over
// a random prime modulus in [2^61, 2^62) with a random base. Two different
// words of length n collide in one lane with probability at most n / 2^61.
// Unequal fingerprints prove the words differ, so only positive answers carry
// an error bound. EqualityMode::exact replaces the fingerprint comparison by
// expansion under the cap, EqualityMode::verify confirms positive fingerprint
// answers by expansion when the words fit under the cap.

#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ltw/error.hpp"
#include "ltw/modular.hpp"

namespace ltw {

/// Pool-scoped handle of a word. Two handles may denote equal words without
/// naming the same node.
struct WordRef {
  std::uint32_t pool = 0;
  std::uint32_t node = 0;

  friend bool operator==(const WordRef&, const WordRef&) = default;
};

enum class EqualityMode { fingerprint, exact, verify };

struct PoolOptions {
  std::uint64_t seed = 0x5eed'1e57'0f'1a7dULL;
  EqualityMode mode = EqualityMode::fingerprint;
  /// Longest word that expand-based strategies may materialize.
  std::size_t expand_cap = 1'000'000;
};

/// One fingerprint lane: a prime modulus and an evaluation base.
struct FingerprintLane {
  std::uint64_t modulus = 0;
  std::uint64_t base = 0;
};

inline constexpr std::size_t kLanes = 2;

/// Fingerprint of a word in every lane: hash = sum w[i] * base^(n-1-i) and
/// power = base^n, both reduced modulo the lane prime.
struct Fingerprint {
  std::array<std::uint64_t, kLanes> hash{};
  std::array<std::uint64_t, kLanes> power{};

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

class SlpPool {
 public:
  enum class Kind : std::uint8_t { empty, literal, concat };

  struct Node {
    Kind kind = Kind::empty;
    unsigned char symbol = 0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    BigInt length;
    Fingerprint print;
  };

  explicit SlpPool(PoolOptions options = {}) : options_(options), id_(next_pool_id()) {
    std::mt19937_64 rng(options_.seed);
    for (auto& lane : lanes_) {
      lane.modulus = modular::random_prime(rng);
      std::uniform_int_distribution<std::uint64_t> base(1u << 16, lane.modulus - 2);
      lane.base = base(rng);
    }
    Node eps;
    for (std::size_t l = 0; l < kLanes; ++l) eps.print.power[l] = 1;
    nodes_.push_back(std::move(eps));
    literal_ids_.fill(0);
  }

  SlpPool(const SlpPool&) = delete;
  SlpPool& operator=(const SlpPool&) = delete;

  const PoolOptions& options() const { return options_; }
  void set_mode(EqualityMode mode) { options_.mode = mode; }
  void set_expand_cap(std::size_t cap) { options_.expand_cap = cap; }
  const std::array<FingerprintLane, kLanes>& lanes() const { return lanes_; }
  std::uint32_t id() const { return id_; }
  std::size_t node_count() const { return nodes_.size(); }
  const Node& node(WordRef w) const { return nodes_[check(w)]; }

  WordRef empty() const { return {id_, 0}; }

  WordRef symbol(unsigned char c) {
    if (literal_ids_[c] == 0) {
      Node n;
      n.kind = Kind::literal;
      n.symbol = c;
      n.length = 1;
      for (std::size_t l = 0; l < kLanes; ++l) {
        n.print.hash[l] = (static_cast<std::uint64_t>(c) + 1) % lanes_[l].modulus;
        n.print.power[l] = lanes_[l].base;
      }
      literal_ids_[c] = push(std::move(n));
    }
    return {id_, literal_ids_[c]};
  }

  /// Word spelling exactly the given symbols, built as a balanced tree.
  WordRef literal(std::string_view symbols) {
    if (symbols.empty()) return empty();
    if (symbols.size() == 1) return symbol(static_cast<unsigned char>(symbols[0]));
    std::size_t half = symbols.size() / 2;
    WordRef left = literal(symbols.substr(0, half));
    return concat(left, literal(symbols.substr(half)));
  }

  WordRef concat(WordRef a, WordRef b) {
    std::uint32_t x = check(a), y = check(b);
    if (x == 0) return b;
    if (y == 0) return a;
    std::uint64_t key = (static_cast<std::uint64_t>(x) << 32) | y;
    if (auto it = concat_ids_.find(key); it != concat_ids_.end()) return {id_, it->second};
    Node n;
    n.kind = Kind::concat;
    n.left = x;
    n.right = y;
    n.length = nodes_[x].length + nodes_[y].length;
    for (std::size_t l = 0; l < kLanes; ++l) {
      const auto m = lanes_[l].modulus;
      const auto& px = nodes_[x].print;
      const auto& py = nodes_[y].print;
      n.print.hash[l] = modular::add(modular::mul(px.hash[l], py.power[l], m), py.hash[l], m);
      n.print.power[l] = modular::mul(px.power[l], py.power[l], m);
    }
    std::uint32_t id = push(std::move(n));
    concat_ids_.emplace(key, id);
    return {id_, id};
  }

  template <class... Words>
  WordRef concat(WordRef a, WordRef b, WordRef c, Words... rest) {
    return concat(concat(a, b), c, rest...);
  }

  const BigInt& length(WordRef w) const { return nodes_[check(w)].length; }
  bool is_empty(WordRef w) const { return check(w) == 0; }
  const Fingerprint& fingerprint(WordRef w) const { return nodes_[check(w)].print; }

  /// The denoted word, or CapExceeded when it is longer than cap.
  std::string expand(WordRef w, std::size_t cap) const {
    const BigInt& n = length(w);
    if (n > cap) throw CapExceeded(n);
    return expand_prefix(w, static_cast<std::size_t>(n));
  }

  std::string expand(WordRef w) const { return expand(w, options_.expand_cap); }

  /// The first min(count, |w|) symbols of w; never materializes more.
  std::string expand_prefix(WordRef w, std::size_t count) const {
    std::string out;
    std::vector<std::uint32_t> stack{check(w)};
    while (!stack.empty() && out.size() < count) {
      const Node& n = nodes_[stack.back()];
      stack.pop_back();
      switch (n.kind) {
        case Kind::empty:
          break;
        case Kind::literal:
          out.push_back(static_cast<char>(n.symbol));
          break;
        case Kind::concat:
          stack.push_back(n.right);
          stack.push_back(n.left);
          break;
      }
    }
    return out;
  }

  unsigned char symbol_at(WordRef w, BigInt index) const {
    std::uint32_t cur = check(w);
    if (index >= nodes_[cur].length) throw OutOfRange("symbol index past the end of the word");
    while (nodes_[cur].kind == Kind::concat) {
      const Node& n = nodes_[cur];
      if (index < nodes_[n.left].length) {
        cur = n.left;
      } else {
        index -= nodes_[n.left].length;
        cur = n.right;
      }
    }
    return nodes_[cur].symbol;
  }

  bool equals(WordRef a, WordRef b) const {
    std::uint32_t x = check(a), y = check(b);
    if (x == y) return true;
    if (nodes_[x].length != nodes_[y].length) return false;
    switch (options_.mode) {
      case EqualityMode::fingerprint:
        return nodes_[x].print == nodes_[y].print;
      case EqualityMode::exact:
        return expand(a) == expand(b);
      case EqualityMode::verify:
        if (!(nodes_[x].print == nodes_[y].print)) return false;
        if (nodes_[x].length > options_.expand_cap) return true;
        return expand(a) == expand(b);
    }
    return false;
  }

  /// w with its first n symbols removed.
  WordRef strip_prefix(WordRef w, const BigInt& n) {
    if (n < 0 || n > length(w)) throw OutOfRange("strip_prefix past the end of the word");
    return drop_front(w, n);
  }

  /// w with its last n symbols removed.
  WordRef strip_suffix(WordRef w, const BigInt& n) {
    if (n < 0 || n > length(w)) throw OutOfRange("strip_suffix past the end of the word");
    return keep_front(w, length(w) - n);
  }

  WordRef take_prefix(WordRef w, const BigInt& n) {
    if (n < 0 || n > length(w)) throw OutOfRange("take_prefix past the end of the word");
    return keep_front(w, n);
  }

  WordRef take_suffix(WordRef w, const BigInt& n) {
    if (n < 0 || n > length(w)) throw OutOfRange("take_suffix past the end of the word");
    return drop_front(w, length(w) - n);
  }

  /// rho_n[w]: the prefix of size n mod |w| moved to the end.
  WordRef rotate_left(WordRef w, const BigInt& n) {
    if (n < 0) throw OutOfRange("negative rotation");
    const BigInt& len = length(w);
    if (len == 0) return w;
    BigInt m = n % len;
    if (m == 0) return w;
    return concat(drop_front(w, m), keep_front(w, m));
  }

  WordRef reverse(WordRef w) {
    std::uint32_t root = check(w);
    if (reversed_.size() < nodes_.size()) reversed_.resize(nodes_.size(), kUnset);
    std::vector<std::pair<std::uint32_t, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [id, expanded] = stack.back();
      stack.pop_back();
      if (id < reversed_.size() && reversed_[id] != kUnset) continue;
      const Node& n = nodes_[id];
      if (n.kind != Kind::concat) {
        set_reversed(id, id);
        continue;
      }
      if (!expanded) {
        stack.push_back({id, true});
        stack.push_back({n.left, false});
        stack.push_back({n.right, false});
        continue;
      }
      std::uint32_t left = n.left, right = n.right;
      WordRef r = concat(WordRef{id_, reversed_[right]}, WordRef{id_, reversed_[left]});
      set_reversed(id, r.node);
      set_reversed(r.node, id);
    }
    return {id_, reversed_[root]};
  }

  /// p^k with O(log k) new nodes.
  WordRef power(WordRef p, BigInt k) {
    if (k < 0) throw OutOfRange("negative power");
    WordRef result = empty();
    WordRef base = p;
    while (k > 0) {
      if ((k & 1) != 0) result = concat(result, base);
      k >>= 1;
      if (k > 0) base = concat(base, base);
    }
    return result;
  }

  /// True iff w is in p^*.
  bool is_power_of(WordRef w, WordRef p) {
    const BigInt& n = length(w);
    if (n == 0) return true;
    const BigInt& m = length(p);
    if (m == 0 || n % m != 0) return false;
    return equals(w, power(p, n / m));
  }

  /// The prefix of length |w| of the infinite word rho_phase[p] rho_phase[p] ...
  /// compared against w. Requires |p| >= 1.
  bool matches_periodic(WordRef w, WordRef p, const BigInt& phase) {
    const BigInt& n = length(w);
    if (n == 0) return true;
    const BigInt& m = length(p);
    WordRef rotated = rotate_left(p, phase);
    BigInt copies = (n + m - 1) / m;
    return equals(w, keep_front(power(rotated, copies), n));
  }

  /// Smallest r with w = r^k. Words under the expansion cap use the failure
  /// function; longer words whose length fits 64 bits test rotations against
  /// the divisors of the length.
  WordRef primitive_root(WordRef w) {
    const BigInt& n = length(w);
    if (n == 0) throw OutOfRange("primitive root of the empty word");
    if (n <= options_.expand_cap) {
      std::string s = expand(w);
      std::vector<std::size_t> fail(s.size() + 1, 0);
      for (std::size_t i = 1, k = 0; i < s.size(); ++i) {
        while (k > 0 && s[i] != s[k]) k = fail[k];
        if (s[i] == s[k]) ++k;
        fail[i + 1] = k;
      }
      std::size_t period = s.size() - fail[s.size()];
      if (s.size() % period != 0) period = s.size();
      return keep_front(w, period);
    }
    if (n > std::numeric_limits<std::uint64_t>::max()) throw CapExceeded(n);
    auto total = static_cast<std::uint64_t>(n);
    std::uint64_t root = total;
    for (std::uint64_t f : modular::prime_factors(total)) {
      while (root % f == 0 && equals(rotate_left(w, root / f), w)) root /= f;
    }
    return keep_front(w, root);
  }

 private:
  static constexpr std::uint32_t kUnset = 0xffffffffu;

  static std::uint32_t next_pool_id() {
    static std::atomic<std::uint32_t> counter{1};
    return counter.fetch_add(1);
  }

  std::uint32_t check(WordRef w) const {
    if (w.pool != id_) throw PoolMismatch();
    return w.node;
  }

  std::uint32_t push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  void set_reversed(std::uint32_t from, std::uint32_t to) {
    if (reversed_.size() <= std::max(from, to)) reversed_.resize(std::max(from, to) + 1, kUnset);
    reversed_[from] = to;
  }

  // Nodes strictly inside [0, |w|] are split along the root-to-leaf path.
  WordRef drop_front(WordRef w, BigInt n) {
    std::uint32_t cur = check(w);
    std::vector<std::uint32_t> rights;
    while (n > 0 && n < nodes_[cur].length) {
      const Node& node = nodes_[cur];
      const BigInt& left_len = nodes_[node.left].length;
      if (n >= left_len) {
        n -= left_len;
        cur = node.right;
      } else {
        rights.push_back(node.right);
        cur = node.left;
      }
    }
    WordRef result = (n == 0) ? WordRef{id_, cur} : empty();
    for (auto it = rights.rbegin(); it != rights.rend(); ++it) result = concat(result, {id_, *it});
    return result;
  }

  WordRef keep_front(WordRef w, BigInt n) {
    std::uint32_t cur = check(w);
    std::vector<std::uint32_t> lefts;
    while (n > 0 && n < nodes_[cur].length) {
      const Node& node = nodes_[cur];
      const BigInt& left_len = nodes_[node.left].length;
      if (n <= left_len) {
        cur = node.left;
      } else {
        lefts.push_back(node.left);
        n -= left_len;
        cur = node.right;
      }
    }
    WordRef result = (n == 0) ? empty() : WordRef{id_, cur};
    for (auto it = lefts.rbegin(); it != lefts.rend(); ++it) result = concat({id_, *it}, result);
    return result;
  }

  PoolOptions options_;
  std::uint32_t id_;
  std::array<FingerprintLane, kLanes> lanes_{};
  std::vector<Node> nodes_;
  std::array<std::uint32_t, 256> literal_ids_{};
  std::unordered_map<std::uint64_t, std::uint32_t> concat_ids_;
  std::vector<std::uint32_t> reversed_;
};

}  // namespace ltw
