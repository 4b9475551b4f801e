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

// The .ltw text format and tree literals.
//
//   # comment
//   input f:1, g:0
//   slp A = 'a'
//   slp B = $A A "b"
//   axiom = "pre" q(x) "post"
//   rule q f(x1) = "a" q1(x1) "c"
//   rule q2 g = "abc"
//
// Words are juxtaposed double-quoted literals and $NAME references (bare
// names are also accepted inside slp declarations). Escapes: \" \\ \xHH.

#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ltw/transducer.hpp"

namespace ltw::format {

namespace detail {

struct Token {
  enum class Kind { ident, string, character, ref, number, punct, newline, end };
  Kind kind = Kind::end;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_blanks();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= text_.size()) return t;
    const char c = text_[pos_];
    if (c == '\n') {
      advance();
      t.kind = Token::Kind::newline;
      return t;
    }
    if (c == '"' || c == '\'') {
      t.kind = c == '"' ? Token::Kind::string : Token::Kind::character;
      t.text = quoted(c);
      if (t.kind == Token::Kind::character && t.text.size() != 1) {
        throw ParseError(t.line, t.column, "a character literal holds exactly one symbol");
      }
      return t;
    }
    if (c == '$') {
      advance();
      t.kind = Token::Kind::ref;
      t.text = identifier();
      if (t.text.empty()) throw ParseError(t.line, t.column, "expected a name after $");
      return t;
    }
    if (is_ident_start(c)) {
      t.kind = Token::Kind::ident;
      t.text = identifier();
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::number;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        t.text.push_back(text_[pos_]);
        advance();
      }
      return t;
    }
    if (std::string_view("()=,:").find(c) != std::string_view::npos) {
      advance();
      t.kind = Token::Kind::punct;
      t.text = std::string(1, c);
      return t;
    }
    throw ParseError(line_, column_, std::string("unexpected character '") + c + "'");
  }

 private:
  static bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blanks() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else {
        break;
      }
    }
  }

  std::string identifier() {
    std::string out;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      out.push_back(text_[pos_]);
      advance();
    }
    return out;
  }

  std::string quoted(char quote) {
    const std::size_t line = line_, column = column_;
    advance();
    std::string out;
    for (;;) {
      if (pos_ >= text_.size() || text_[pos_] == '\n') {
        throw ParseError(line, column, "unterminated literal");
      }
      char c = text_[pos_];
      if (c == quote) {
        advance();
        return out;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= text_.size()) throw ParseError(line_, column_, "dangling escape");
        char e = text_[pos_];
        if (e == '"' || e == '\\' || e == '\'') {
          out.push_back(e);
          advance();
        } else if (e == 'x') {
          advance();
          int value = 0;
          for (int i = 0; i < 2; ++i) {
            if (pos_ >= text_.size() || !std::isxdigit(static_cast<unsigned char>(text_[pos_]))) {
              throw ParseError(line_, column_, "expected two hex digits after \\x");
            }
            value = value * 16 + std::stoi(std::string(1, text_[pos_]), nullptr, 16);
            advance();
          }
          out.push_back(static_cast<char>(value));
        } else {
          throw ParseError(line_, column_, std::string("unknown escape \\") + e);
        }
        continue;
      }
      out.push_back(c);
      advance();
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  Parser(std::string_view text, std::shared_ptr<SlpPool> pool)
      : lexer_(text), pool_(std::move(pool)) {
    tok_ = lexer_.next();
  }

  Ltw parse() {
    RankedAlphabet alphabet;
    struct PendingRule {
      std::string state;
      std::string symbol;
      std::size_t arity;
      std::vector<WordRef> words;
      std::vector<std::pair<std::string, std::uint32_t>> calls;
      Token at;
    };
    std::vector<PendingRule> rules;
    std::optional<std::tuple<WordRef, std::string, WordRef>> axiom;
    std::vector<std::string> state_order;
    auto note_state = [&](const std::string& s) {
      if (std::find(state_order.begin(), state_order.end(), s) == state_order.end()) {
        state_order.push_back(s);
      }
    };
    while (tok_.kind != Token::Kind::end) {
      if (tok_.kind == Token::Kind::newline) {
        bump();
        continue;
      }
      const Token head = expect_ident("a declaration");
      if (head.text == "input") {
        while (!at_line_end()) {
          if (is_punct(",")) {
            bump();
            continue;
          }
          Token name = expect_ident("a symbol name");
          expect_punct(":");
          if (tok_.kind != Token::Kind::number) error("expected an arity");
          unsigned arity = static_cast<unsigned>(std::stoul(tok_.text));
          bump();
          try {
            alphabet.add(name.text, arity);
          } catch (const InvalidTransducer& e) {
            throw ParseError(name.line, name.column, e.what());
          }
        }
      } else if (head.text == "slp") {
        Token name = expect_ident("an slp name");
        expect_punct("=");
        if (slps_.count(name.text)) {
          throw ParseError(name.line, name.column, "slp " + name.text + " defined twice");
        }
        WordRef w = pool_->empty();
        while (!at_line_end()) w = pool_->concat(w, word_item(true));
        slps_.emplace(name.text, w);
      } else if (head.text == "axiom") {
        if (axiom) throw ParseError(head.line, head.column, "second axiom");
        expect_punct("=");
        WordRef pre = words();
        Token state = expect_ident("the axiom state");
        if (is_punct("(")) {
          bump();
          Token var = expect_ident("x");
          if (var.text != "x" && var.text != "x0" && var.text != "x1") {
            throw ParseError(var.line, var.column, "the axiom variable must be x");
          }
          expect_punct(")");
        }
        WordRef post = words();
        if (!at_line_end()) error("the axiom calls exactly one state");
        axiom.emplace(pre, state.text, post);
        note_state(state.text);
      } else if (head.text == "rule") {
        PendingRule r;
        r.at = head;
        r.state = expect_ident("a state").text;
        note_state(r.state);
        Token symbol = expect_ident("an input symbol");
        r.symbol = symbol.text;
        std::size_t n = 0;
        if (is_punct("(")) {
          bump();
          while (!is_punct(")")) {
            if (n > 0) expect_punct(",");
            Token var = expect_ident("a variable");
            if (var.text != "x" + std::to_string(n + 1)) {
              throw ParseError(var.line, var.column,
                               "expected variable x" + std::to_string(n + 1));
            }
            ++n;
          }
          bump();
        }
        r.arity = n;
        expect_punct("=");
        r.words.push_back(words());
        while (!at_line_end()) {
          Token callee = expect_ident("a state call");
          expect_punct("(");
          Token var = expect_ident("a variable");
          std::uint32_t child = 0;
          if (var.text.size() < 2 || var.text[0] != 'x' ||
              !std::all_of(var.text.begin() + 1, var.text.end(),
                           [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            throw ParseError(var.line, var.column, "expected a variable x1, x2, ...");
          }
          child = static_cast<std::uint32_t>(std::stoul(var.text.substr(1)));
          if (child < 1 || child > n) {
            throw ParseError(var.line, var.column, "variable " + var.text + " is not bound");
          }
          expect_punct(")");
          r.calls.emplace_back(callee.text, child - 1);
          note_state(callee.text);
          r.words.push_back(words());
        }
        rules.push_back(std::move(r));
      } else {
        throw ParseError(head.line, head.column, "unknown declaration " + head.text);
      }
      if (tok_.kind != Token::Kind::end) {
        if (tok_.kind != Token::Kind::newline) error("expected end of line");
        bump();
      }
    }
    if (!axiom) throw ParseError(tok_.line, tok_.column, "missing axiom");
    if (!alphabet.has_leaf()) {
      throw ParseError(tok_.line, tok_.column, "the input alphabet has no symbol of arity 0");
    }
    Ltw m(pool_, alphabet);
    for (const auto& s : state_order) m.add_state(s);
    auto& [pre, state, post] = *axiom;
    m.set_axiom({pre, m.state(state), post});
    for (auto& r : rules) {
      auto f = alphabet.find(r.symbol);
      if (!f) throw ParseError(r.at.line, r.at.column, "undeclared input symbol " + r.symbol);
      if (alphabet.arity(*f) != r.arity) {
        throw ParseError(r.at.line, r.at.column,
                         "symbol " + r.symbol + " has arity " + std::to_string(alphabet.arity(*f)));
      }
      const StateId q = m.state(r.state);
      if (m.rule(q, *f) != nullptr) {
        throw ParseError(r.at.line, r.at.column,
                         "second rule for state " + r.state + " and symbol " + r.symbol);
      }
      Rule rule;
      rule.words = r.words;
      for (const auto& [callee, child] : r.calls) rule.calls.push_back({m.state(callee), child});
      try {
        m.set_rule(q, *f, std::move(rule));
      } catch (const InvalidTransducer& e) {
        throw ParseError(r.at.line, r.at.column, e.what());
      }
    }
    return m;
  }

 private:
  void bump() { tok_ = lexer_.next(); }

  [[noreturn]] void error(const std::string& what) const {
    throw ParseError(tok_.line, tok_.column, what);
  }

  bool at_line_end() const {
    return tok_.kind == Token::Kind::newline || tok_.kind == Token::Kind::end;
  }

  bool is_punct(const char* p) const { return tok_.kind == Token::Kind::punct && tok_.text == p; }

  void expect_punct(const char* p) {
    if (!is_punct(p)) error(std::string("expected '") + p + "'");
    bump();
  }

  Token expect_ident(const char* what) {
    if (tok_.kind != Token::Kind::ident) error(std::string("expected ") + what);
    Token t = tok_;
    bump();
    return t;
  }

  WordRef word_item(bool bare_names) {
    Token t = tok_;
    switch (t.kind) {
      case Token::Kind::string:
      case Token::Kind::character:
        bump();
        return pool_->literal(t.text);
      case Token::Kind::ref:
        bump();
        return lookup(t);
      case Token::Kind::ident:
        if (bare_names) {
          bump();
          return lookup(t);
        }
        break;
      default:
        break;
    }
    error("expected a word");
  }

  WordRef lookup(const Token& t) const {
    auto it = slps_.find(t.text);
    if (it == slps_.end()) throw ParseError(t.line, t.column, "undefined slp " + t.text);
    return it->second;
  }

  /// Juxtaposed literals and references, possibly none.
  WordRef words() {
    WordRef w = pool_->empty();
    while (tok_.kind == Token::Kind::string || tok_.kind == Token::Kind::character ||
           tok_.kind == Token::Kind::ref) {
      w = pool_->concat(w, word_item(false));
    }
    return w;
  }

  Lexer lexer_;
  Token tok_;
  std::shared_ptr<SlpPool> pool_;
  std::unordered_map<std::string, WordRef> slps_;
};

inline std::string quote(std::string_view s) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "\"";
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (u < 0x20 || u >= 0x7f) {
      out += "\\x";
      out += kHex[u >> 4];
      out += kHex[u & 15];
    } else {
      out += c;
    }
  }
  out += '"';
  return out;
}

/// Assigns slp names to the nodes of long words, definitions first.
class SlpNamer {
 public:
  static constexpr std::size_t kInlineLimit = 64;

  explicit SlpNamer(const SlpPool& pool) : pool_(pool) {}

  /// Printed form of w: a literal, or a reference to a declared slp.
  std::string term(WordRef w) {
    if (pool_.length(w) <= kInlineLimit) return quote(pool_.expand(w, kInlineLimit));
    declare(w);
    return "$" + names_.at(w.node);
  }

  const std::vector<std::string>& declarations() const { return decls_; }

 private:
  void declare(WordRef root) {
    std::vector<std::pair<WordRef, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [w, children_done] = stack.back();
      stack.pop_back();
      if (names_.count(w.node) || pool_.length(w) <= kInlineLimit) continue;
      const auto& n = pool_.node(w);
      WordRef l{w.pool, n.left}, r{w.pool, n.right};
      if (!children_done) {
        stack.push_back({w, true});
        stack.push_back({r, false});
        stack.push_back({l, false});
        continue;
      }
      std::string name = "S" + std::to_string(names_.size());
      decls_.push_back("slp " + name + " = " + term(l) + " " + term(r));
      names_.emplace(w.node, name);
    }
  }

  const SlpPool& pool_;
  std::unordered_map<std::uint32_t, std::string> names_;
  std::vector<std::string> decls_;
};

}  // namespace detail

/// Parses a .ltw document into a transducer whose words live in pool.
inline Ltw parse_ltw(std::string_view text, std::shared_ptr<SlpPool> pool) {
  return detail::Parser(text, std::move(pool)).parse();
}

inline Ltw parse_ltw(std::string_view text) {
  return parse_ltw(text, std::make_shared<SlpPool>());
}

/// Canonical text: input, slp declarations, axiom, then rules sorted by
/// state name and symbol declaration order.
inline std::string print_ltw(const Ltw& m) {
  const SlpPool& pool = m.pool();
  detail::SlpNamer namer(pool);
  std::ostringstream body;
  auto words_then = [&](std::string& line, WordRef w) {
    if (!pool.is_empty(w)) line += " " + namer.term(w);
  };
  {
    std::string line = "axiom =";
    words_then(line, m.axiom().pre);
    line += " " + m.name(m.axiom().state) + "(x)";
    words_then(line, m.axiom().post);
    body << line << "\n";
  }
  std::vector<StateId> states = m.states();
  std::sort(states.begin(), states.end(),
            [&](StateId a, StateId b) { return m.name(a) < m.name(b); });
  for (StateId q : states) {
    for (const auto& [f, rule] : m.rules_of(q)) {
      std::string line = "rule " + m.name(q) + " " + m.alphabet().name(f);
      const unsigned n = m.alphabet().arity(f);
      if (n > 0) {
        line += "(";
        for (unsigned i = 0; i < n; ++i) line += (i ? ",x" : "x") + std::to_string(i + 1);
        line += ")";
      }
      line += " =";
      bool empty = true;
      for (std::size_t k = 0; k <= rule->calls.size(); ++k) {
        if (!pool.is_empty(rule->words[k])) {
          words_then(line, rule->words[k]);
          empty = false;
        }
        if (k < rule->calls.size()) {
          line += " " + m.name(rule->calls[k].state) + "(x" +
                  std::to_string(rule->calls[k].child + 1) + ")";
          empty = false;
        }
      }
      if (empty) line += " \"\"";
      body << line << "\n";
    }
  }
  std::ostringstream out;
  out << "input";
  const auto& symbols = m.alphabet().symbols();
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    out << (i ? ", " : " ") << symbols[i].name << ":" << symbols[i].arity;
  }
  out << "\n";
  for (const auto& d : namer.declarations()) out << d << "\n";
  out << body.str();
  return out.str();
}

/// Printed form of a word: a quoted literal when at most limit symbols long,
/// otherwise its length and quoted prefix.
inline std::string describe_word(const SlpPool& pool, WordRef w, std::size_t limit = 64) {
  if (pool.length(w) <= limit) return detail::quote(pool.expand(w, limit));
  return "<length " + pool.length(w).str() + ", prefix " +
         detail::quote(pool.expand_prefix(w, limit)) + ">";
}

namespace detail {

class TreeParser {
 public:
  explicit TreeParser(std::string_view text) : lexer_(text) { tok_ = lexer_.next(); }

  Tree parse() {
    Tree t = node();
    while (tok_.kind == Token::Kind::newline) tok_ = lexer_.next();
    if (tok_.kind != Token::Kind::end) throw ParseError(tok_.line, tok_.column, "trailing input");
    return t;
  }

 private:
  Tree node() {
    if (tok_.kind != Token::Kind::ident) {
      throw ParseError(tok_.line, tok_.column, "expected a symbol");
    }
    Tree t(tok_.text);
    tok_ = lexer_.next();
    if (tok_.kind == Token::Kind::punct && tok_.text == "(") {
      tok_ = lexer_.next();
      bool first = true;
      while (!(tok_.kind == Token::Kind::punct && tok_.text == ")")) {
        if (!first) {
          if (!(tok_.kind == Token::Kind::punct && tok_.text == ",")) {
            throw ParseError(tok_.line, tok_.column, "expected ',' or ')'");
          }
          tok_ = lexer_.next();
        }
        t.children.push_back(node());
        first = false;
      }
      tok_ = lexer_.next();
    }
    return t;
  }

  Lexer lexer_;
  Token tok_;
};

inline void check_tree(const Tree& t, const RankedAlphabet& alphabet) {
  auto f = alphabet.find(t.symbol);
  if (!f) throw ParseError(1, 1, "unknown symbol " + t.symbol);
  if (alphabet.arity(*f) != t.children.size()) {
    throw ParseError(1, 1,
                     "symbol " + t.symbol + " expects " + std::to_string(alphabet.arity(*f)) +
                         " children, got " + std::to_string(t.children.size()));
  }
  for (const auto& c : t.children) check_tree(c, alphabet);
}

}  // namespace detail

/// Parses a tree literal such as f(g,h(g)); empty parentheses are optional.
inline Tree parse_tree(std::string_view text) { return detail::TreeParser(text).parse(); }

/// Parses a tree literal and checks it against the arities of alphabet.
inline Tree parse_tree(std::string_view text, const RankedAlphabet& alphabet) {
  Tree t = parse_tree(text);
  detail::check_tree(t, alphabet);
  return t;
}

}  // namespace ltw::format
