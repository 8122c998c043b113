// Copyright 2026 The clssmt Authors
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

namespace clssmt {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed concrete syntax (types, repositories, terms, constraint files).
/// Line and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(format(message, line, column)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line,
                            std::size_t column) {
    if (line == 0) return message;
    std::string where = "line " + std::to_string(line);
    if (column != 0) where += ", column " + std::to_string(column);
    return where + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

/// Well-formed input that violates a semantic invariant (arity clash,
/// unbound variable, unknown name, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Inhabitation aborted because a configured safety cap was exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A layout does not describe a well-formed inhabitant tree.
class MalformedTree : public Error {
 public:
  using Error::Error;
};

/// The external solver process failed or answered something unparseable.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace clssmt
