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

// Minimal SMT-LIB s-expressions, enough to read solver responses.

#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clssmt/error.hpp"

namespace clssmt {

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;

  bool is_atom(std::string_view a) const { return !is_list && atom == a; }

  std::string str() const {
    if (!is_list) return atom;
    std::string out = "(";
    for (std::size_t i = 0; i < items.size(); ++i)
      out += (i ? " " : "") + items[i].str();
    return out + ")";
  }
};

/// Length of the first complete s-expression in `text` (leading whitespace
/// included), or nullopt if `text` ends before it does.
inline std::optional<std::size_t> complete_sexpr_length(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i == text.size()) return std::nullopt;
  if (text[i] != '(') {
    if (text[i] == ')') throw SolverError("unbalanced ')' in solver output");
    std::size_t j = i;
    if (text[j] == '"' || text[j] == '|') {
      char q = text[j++];
      while (j < text.size() && text[j] != q) ++j;
      if (j == text.size()) return std::nullopt;
      return j + 1;
    }
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
           text[j] != '(' && text[j] != ')')
      ++j;
    // An atom is complete once a delimiter follows it.
    if (j == text.size()) return std::nullopt;
    return j;
  }
  int depth = 0;
  for (std::size_t j = i; j < text.size(); ++j) {
    char c = text[j];
    if (c == '"' || c == '|') {
      std::size_t k = text.find(c, j + 1);
      if (k == std::string_view::npos) return std::nullopt;
      j = k;
    } else if (c == ';') {
      std::size_t k = text.find('\n', j);
      if (k == std::string_view::npos) return std::nullopt;
      j = k;
    } else if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (--depth == 0) return j + 1;
    }
  }
  return std::nullopt;
}

namespace detail {

class SExprParser {
 public:
  explicit SExprParser(std::string_view t) : t_(t) {}

  SExpr parse() {
    skip();
    if (p_ >= t_.size()) throw SolverError("empty s-expression");
    if (t_[p_] == '(') {
      ++p_;
      SExpr e;
      e.is_list = true;
      while (true) {
        skip();
        if (p_ >= t_.size()) throw SolverError("unterminated s-expression");
        if (t_[p_] == ')') {
          ++p_;
          return e;
        }
        e.items.push_back(parse());
      }
    }
    if (t_[p_] == ')') throw SolverError("unexpected ')'");
    SExpr e;
    if (t_[p_] == '"' || t_[p_] == '|') {
      char q = t_[p_];
      std::size_t k = t_.find(q, p_ + 1);
      if (k == std::string_view::npos) throw SolverError("unterminated literal");
      e.atom = std::string(t_.substr(p_, k + 1 - p_));
      p_ = k + 1;
      return e;
    }
    std::size_t b = p_;
    while (p_ < t_.size() && !std::isspace(static_cast<unsigned char>(t_[p_])) &&
           t_[p_] != '(' && t_[p_] != ')')
      ++p_;
    e.atom = std::string(t_.substr(b, p_ - b));
    return e;
  }

  void skip() {
    while (p_ < t_.size()) {
      if (std::isspace(static_cast<unsigned char>(t_[p_]))) {
        ++p_;
      } else if (t_[p_] == ';') {
        while (p_ < t_.size() && t_[p_] != '\n') ++p_;
      } else {
        break;
      }
    }
  }

  std::size_t pos() const { return p_; }

 private:
  std::string_view t_;
  std::size_t p_ = 0;
};

}  // namespace detail

inline SExpr parse_sexpr(std::string_view text) {
  detail::SExprParser p(text);
  SExpr e = p.parse();
  p.skip();
  if (p.pos() != text.size()) throw SolverError("trailing text after s-expression");
  return e;
}

/// An integer literal: `42` or `(- 42)`.
inline std::int64_t sexpr_to_int(const SExpr& e) {
  try {
    if (!e.is_list) {
      std::size_t used = 0;
      long long v = std::stoll(e.atom, &used);
      if (used == e.atom.size()) return v;
    } else if (e.items.size() == 2 && e.items[0].is_atom("-") && !e.items[1].is_list) {
      return -sexpr_to_int(e.items[1]);
    }
  } catch (const std::logic_error&) {
  }
  throw SolverError("expected an integer value, got '" + e.str() + "'");
}

}  // namespace clssmt
