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

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace ltw::modular {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mul(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 add(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return (s >= m || s < a) ? s - m : s;
}

inline u64 sub(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 pow(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul(result, base, m);
    base = mul(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Modular inverse for prime m.
inline u64 inverse(u64 a, u64 m) { return pow(a, m - 2, m); }

/// Deterministic Miller-Rabin for the full 64-bit range.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Uniformly drawn prime in [2^61, 2^62).
template <class Rng>
u64 random_prime(Rng& rng) {
  std::uniform_int_distribution<u64> dist(u64{1} << 61, (u64{1} << 62) - 1);
  for (;;) {
    u64 candidate = dist(rng) | 1;
    if (is_prime(candidate)) return candidate;
  }
}

namespace detail {

inline u64 pollard_rho(u64 n, u64 seed) {
  if (n % 2 == 0) return 2;
  u64 c = seed % (n - 1) + 1;
  u64 x = seed % n, y = x, d = 1;
  auto f = [&](u64 v) { return add(mul(v, v, n), c, n); };
  while (d == 1) {
    x = f(x);
    y = f(f(y));
    d = std::gcd(x > y ? x - y : y - x, n);
  }
  return d;
}

inline void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n % p == 0) {
      out.push_back(p);
      factor_into(n / p, out);
      return;
    }
  }
  for (u64 seed = 2;; ++seed) {
    u64 d = pollard_rho(n, seed);
    if (d != n) {
      factor_into(d, out);
      factor_into(n / d, out);
      return;
    }
  }
}

}  // namespace detail

/// Distinct prime factors of n, ascending.
inline std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  detail::factor_into(n, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace ltw::modular
