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
#include <cstddef>
#include <string>
#include <vector>

namespace ltw {

/// Ranked input term. Symbols are referenced by name so that one tree can be
/// fed to transducers declaring their alphabets in different orders.
struct Tree {
  std::string symbol;
  std::vector<Tree> children;

  Tree() = default;
  explicit Tree(std::string s, std::vector<Tree> kids = {})
      : symbol(std::move(s)), children(std::move(kids)) {}

  std::size_t depth() const {
    std::size_t d = 0;
    for (const auto& c : children) d = std::max(d, c.depth());
    return d + 1;
  }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }

  std::string to_string() const {
    std::string out = symbol;
    if (!children.empty()) {
      out += '(';
      for (std::size_t i = 0; i < children.size(); ++i) {
        if (i > 0) out += ',';
        out += children[i].to_string();
      }
      out += ')';
    }
    return out;
  }

  friend bool operator==(const Tree&, const Tree&) = default;
};

}  // namespace ltw
