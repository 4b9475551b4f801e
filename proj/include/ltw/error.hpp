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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace ltw {

/// Exact, arbitrary precision integer used for word lengths and shifts.
using BigInt = boost::multiprecision::cpp_int;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A word had to be materialized but is longer than the configured cap.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(BigInt length)
      : Error("word of length " + length.str() + " exceeds the expansion cap"),
        length_(std::move(length)) {}

  const BigInt& length() const { return length_; }

 private:
  BigInt length_;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class PoolMismatch : public Error {
 public:
  PoolMismatch() : Error("words belong to different SLP pools") {}
};

class UndefinedInput : public Error {
 public:
  UndefinedInput(std::string path, std::string state, std::string symbol)
      : Error("undefined input at " + path + ": state " + state +
              " has no rule for " + symbol),
        path_(std::move(path)),
        state_(std::move(state)),
        symbol_(std::move(symbol)) {}

  const std::string& path() const { return path_; }
  const std::string& state() const { return state_; }
  const std::string& symbol() const { return symbol_; }

 private:
  std::string path_;
  std::string state_;
  std::string symbol_;
};

class EmptyTransducer : public Error {
 public:
  EmptyTransducer() : Error("the axiom state has an empty domain") {}
};

class EmptyDomain : public Error {
 public:
  explicit EmptyDomain(const std::string& state)
      : Error("state " + state + " has an empty domain") {}
};

class NotSameOrdered : public Error {
 public:
  NotSameOrdered() : Error("transducers are not same-ordered") {}
};

class DomainMismatch : public Error {
 public:
  DomainMismatch() : Error("transducers have different domains") {}
};

class InvalidVerdict : public Error {
 public:
  using Error::Error;
};

class InvalidTransducer : public Error {
 public:
  using Error::Error;
};

/// Syntax or validity error in a .ltw document or tree literal.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace ltw
