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

// Intersection types with constructors, their concrete syntax, canonical
// forms, substitution, arrow-path decomposition and BCD subtyping.
//
// Concrete syntax:
//
//   type    ::= inter ( "->" type )?          right associative
//   inter   ::= primary ( "&" primary )*      left nested
//   primary ::= IDENT ( "(" type ( "," type )* ")" )? | "(" type ")"
//
// `∩` and `→` are accepted as synonyms of `&` and `->`.  An identifier is a
// type variable if it starts with `'` or a lowercase Greek letter, or if the
// caller declares it as one; every other identifier is a constant.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clssmt/error.hpp"

namespace clssmt {

class Type {
 public:
  enum class Kind { Constant, Variable, Constructor, Arrow, Intersection };

  static Type constant(std::string name) {
    return Type(Kind::Constant, std::move(name), {});
  }
  static Type variable(std::string name) {
    return Type(Kind::Variable, std::move(name), {});
  }
  static Type constructor(std::string name, std::vector<Type> args) {
    return Type(Kind::Constructor, std::move(name), std::move(args));
  }
  static Type arrow(Type source, Type target) {
    return Type(Kind::Arrow, {}, {std::move(source), std::move(target)});
  }
  static Type intersection(Type left, Type right) {
    return Type(Kind::Intersection, {}, {std::move(left), std::move(right)});
  }

  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_->kind == k; }

  /// Name of a constant, variable or constructor.
  const std::string& name() const { return node_->name; }
  /// Constructor arguments; for arrows {source, target}; for intersections
  /// {left, right}.
  std::span<const Type> children() const { return node_->children; }

  const Type& source() const { return node_->children[0]; }
  const Type& target() const { return node_->children[1]; }
  const Type& left() const { return node_->children[0]; }
  const Type& right() const { return node_->children[1]; }

  friend bool operator==(const Type& a, const Type& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.name() != b.name() ||
        a.children().size() != b.children().size())
      return false;
    for (std::size_t i = 0; i < a.children().size(); ++i)
      if (!(a.children()[i] == b.children()[i])) return false;
    return true;
  }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Type> children;
  };

  Type(Kind kind, std::string name, std::vector<Type> children)
      : node_(std::make_shared<const Node>(
            Node{kind, std::move(name), std::move(children)})) {}

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline void print_type(const Type& t, std::string& out) {
  switch (t.kind()) {
    case Type::Kind::Constant:
    case Type::Kind::Variable:
      out += t.name();
      return;
    case Type::Kind::Constructor: {
      out += t.name();
      out += '(';
      bool first = true;
      for (const Type& arg : t.children()) {
        if (!first) out += ',';
        first = false;
        print_type(arg, out);
      }
      out += ')';
      return;
    }
    case Type::Kind::Arrow: {
      bool paren = t.source().is(Type::Kind::Arrow);
      if (paren) out += '(';
      print_type(t.source(), out);
      if (paren) out += ')';
      out += " -> ";
      print_type(t.target(), out);
      return;
    }
    case Type::Kind::Intersection: {
      bool lparen = t.left().is(Type::Kind::Arrow);
      bool rparen = t.right().is(Type::Kind::Arrow) ||
                    t.right().is(Type::Kind::Intersection);
      if (lparen) out += '(';
      print_type(t.left(), out);
      if (lparen) out += ')';
      out += " & ";
      if (rparen) out += '(';
      print_type(t.right(), out);
      if (rparen) out += ')';
      return;
    }
  }
}

}  // namespace detail

/// Prints with `&`, `->`, `C(a,b)` and the minimal parentheses needed to
/// parse back to the same tree.
inline std::string to_string(const Type& t) {
  std::string out;
  detail::print_type(t, out);
  return out;
}

inline bool operator<(const Type& a, const Type& b) {
  return to_string(a) < to_string(b);
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class TypeParser {
 public:
  TypeParser(std::string_view text, const std::set<std::string>& variables,
             std::size_t line, std::size_t column)
      : text_(text), variables_(variables), line_(line), column0_(column) {}

  Type parse_all() {
    Type t = parse_arrow();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return t;
  }

 private:
  static bool is_ident_byte(unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '\'' || c == '.' || c >= 0x80;
  }

  [[noreturn]] void fail(const std::string& message) const {
    // Columns count bytes from the start of the line.
    throw ParseError(message, line_, column0_ + pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  bool accept_arrow() { return accept("->") || accept("→"); }
  bool accept_intersection() { return accept("&") || accept("∩"); }

  bool at_operator() const {
    std::string_view rest = text_.substr(pos_);
    return rest.starts_with("→") || rest.starts_with("∩");
  }

  Type parse_arrow() {
    Type lhs = parse_intersection();
    if (accept_arrow()) return Type::arrow(std::move(lhs), parse_arrow());
    return lhs;
  }

  Type parse_intersection() {
    Type lhs = parse_primary();
    while (accept_intersection())
      lhs = Type::intersection(std::move(lhs), parse_primary());
    return lhs;
  }

  std::string parse_identifier() {
    skip_space();
    std::size_t begin = pos_;
    while (pos_ < text_.size() && !at_operator() &&
           is_ident_byte(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (begin == pos_) {
      if (pos_ == text_.size()) fail("unexpected end of type");
      fail("expected identifier, found '" + std::string(1, text_[pos_]) + "'");
    }
    return std::string(text_.substr(begin, pos_ - begin));
  }

  Type parse_primary() {
    if (accept("(")) {
      Type inner = parse_arrow();
      if (!accept(")")) fail("expected ')'");
      return inner;
    }
    std::string name = parse_identifier();
    if (accept("(")) {
      std::vector<Type> args;
      args.push_back(parse_arrow());
      while (accept(",")) args.push_back(parse_arrow());
      if (!accept(")")) fail("expected ',' or ')' in constructor arguments");
      return Type::constructor(std::move(name), std::move(args));
    }
    if (variables_.contains(name) || looks_like_variable(name))
      return Type::variable(std::move(name));
    return Type::constant(std::move(name));
  }

 public:
  static bool looks_like_variable(std::string_view name) {
    if (name.empty()) return false;
    if (name[0] == '\'') return true;
    // Lowercase Greek block U+03B1..U+03C9 in UTF-8.
    if (name.size() >= 2) {
      auto b0 = static_cast<unsigned char>(name[0]);
      auto b1 = static_cast<unsigned char>(name[1]);
      if (b0 == 0xCE && b1 >= 0xB1 && b1 <= 0xBF) return true;
      if (b0 == 0xCF && b1 >= 0x80 && b1 <= 0x89) return true;
    }
    return false;
  }

 private:
  std::string_view text_;
  const std::set<std::string>& variables_;
  std::size_t line_;
  std::size_t column0_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a type.  `variables` lists identifiers to read as type variables in
/// addition to the syntactic convention.  `line`/`column` offset error
/// positions when the text is embedded in a larger file.
inline Type parse_type(std::string_view text,
                       const std::set<std::string>& variables = {},
                       std::size_t line = 1, std::size_t column = 1) {
  return detail::TypeParser(text, variables, line, column).parse_all();
}

inline bool is_variable_name(std::string_view name) {
  return detail::TypeParser::looks_like_variable(name);
}

// ---------------------------------------------------------------------------
// Structure

/// Top-level intersection components, left to right.
inline std::vector<Type> components(const Type& t) {
  std::vector<Type> out;
  std::vector<const Type*> stack{&t};
  while (!stack.empty()) {
    const Type* cur = stack.back();
    stack.pop_back();
    if (cur->is(Type::Kind::Intersection)) {
      stack.push_back(&cur->right());
      stack.push_back(&cur->left());
    } else {
      out.push_back(*cur);
    }
  }
  return out;
}

/// Left-nested intersection of a non-empty list.
inline Type intersect_all(std::span<const Type> parts) {
  if (parts.empty()) throw Error("intersection of an empty type list");
  Type acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i)
    acc = Type::intersection(std::move(acc), parts[i]);
  return acc;
}

/// Flattens nested intersections into a sorted, duplicate-free chain at every
/// level.  Two types are the same nonterminal iff their canonical forms print
/// identically.
inline Type canonical(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Constant:
    case Type::Kind::Variable:
      return t;
    case Type::Kind::Constructor: {
      std::vector<Type> args;
      for (const Type& a : t.children()) args.push_back(canonical(a));
      return Type::constructor(t.name(), std::move(args));
    }
    case Type::Kind::Arrow:
      return Type::arrow(canonical(t.source()), canonical(t.target()));
    case Type::Kind::Intersection: {
      std::map<std::string, Type> unique;
      for (const Type& c : components(t)) {
        Type cc = canonical(c);
        // A canonical component is never itself an intersection.
        unique.emplace(to_string(cc), cc);
      }
      std::vector<Type> parts;
      for (auto& [key, c] : unique) parts.push_back(c);
      return intersect_all(parts);
    }
  }
  return t;
}

inline std::string canonical_string(const Type& t) {
  return to_string(canonical(t));
}

inline void collect_variables(const Type& t, std::set<std::string>& out) {
  if (t.is(Type::Kind::Variable)) {
    out.insert(t.name());
    return;
  }
  for (const Type& c : t.children()) collect_variables(c, out);
}

inline bool is_closed(const Type& t) {
  if (t.is(Type::Kind::Variable)) return false;
  return std::all_of(t.children().begin(), t.children().end(),
                     [](const Type& c) { return is_closed(c); });
}

/// Records the arity of every constructor name in `t`; returns the first
/// conflicting name, if any.
inline std::optional<std::string> collect_constructor_arities(
    const Type& t, std::map<std::string, std::size_t>& arities) {
  if (t.is(Type::Kind::Constructor)) {
    auto [it, fresh] = arities.emplace(t.name(), t.children().size());
    if (!fresh && it->second != t.children().size()) return t.name();
  }
  for (const Type& c : t.children())
    if (auto clash = collect_constructor_arities(c, arities)) return clash;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Substitution

/// Variable name to closed type.
using Substitution = std::map<std::string, Type>;

inline Type apply_substitution(const Substitution& s, const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Constant:
      return t;
    case Type::Kind::Variable: {
      auto it = s.find(t.name());
      if (it == s.end())
        throw ValidationError("unbound type variable '" + t.name() + "'");
      return it->second;
    }
    case Type::Kind::Constructor: {
      std::vector<Type> args;
      for (const Type& a : t.children()) args.push_back(apply_substitution(s, a));
      return Type::constructor(t.name(), std::move(args));
    }
    case Type::Kind::Arrow:
      return Type::arrow(apply_substitution(s, t.source()), apply_substitution(s, t.target()));
    case Type::Kind::Intersection:
      return Type::intersection(apply_substitution(s, t.left()), apply_substitution(s, t.right()));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Arrow paths

/// sources[0] -> ... -> sources[n-1] -> target
struct MultiArrow {
  std::vector<Type> sources;
  Type target;

  friend bool operator==(const MultiArrow&, const MultiArrow&) = default;
};

inline std::string to_string(const MultiArrow& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.sources.size(); ++i) {
    if (i) out += ", ";
    out += to_string(m.sources[i]);
  }
  return out + "] => " + to_string(m.target);
}

namespace detail {

inline void collect_paths(const Type& t, std::size_t arity,
                          std::vector<Type>& prefix,
                          std::vector<MultiArrow>& out) {
  for (const Type& comp : components(t)) {
    if (arity == 0) {
      out.push_back(MultiArrow{prefix, comp});
    } else if (comp.is(Type::Kind::Arrow)) {
      prefix.push_back(comp.source());
      collect_paths(comp.target(), arity - 1, prefix, out);
      prefix.pop_back();
    }
  }
}

}  // namespace detail

/// Every reading of `t` as an `arity`-ary function, distributing over
/// intersections at each target.  Duplicates are removed; order follows the
/// components of `t`.
inline std::vector<MultiArrow> paths(const Type& t, std::size_t arity) {
  std::vector<MultiArrow> raw;
  std::vector<Type> prefix;
  detail::collect_paths(t, arity, prefix, raw);
  std::vector<MultiArrow> out;
  std::set<std::string> seen;
  for (auto& m : raw) {
    std::string key = canonical_string(m.target);
    for (const Type& s : m.sources) key += "\x1f" + canonical_string(s);
    if (seen.insert(key).second) out.push_back(std::move(m));
  }
  return out;
}

/// Largest number of arrows along any component path of `t`.
inline std::size_t max_arity(const Type& t) {
  std::size_t best = 0;
  for (const Type& comp : components(t))
    if (comp.is(Type::Kind::Arrow))
      best = std::max(best, 1 + max_arity(comp.target()));
  return best;
}

// ---------------------------------------------------------------------------
// Subtyping

/// Preorder on constant names given by `sub <: super` pairs, closed under
/// reflexivity and transitivity.
class Taxonomy {
 public:
  Taxonomy() = default;

  void add(const std::string& sub, const std::string& super) {
    pairs_.emplace(sub, super);
    up_.clear();
  }

  const std::set<std::pair<std::string, std::string>>& pairs() const {
    return pairs_;
  }
  bool empty() const { return pairs_.empty(); }

  bool leq(const std::string& sub, const std::string& super) const {
    if (sub == super) return true;
    if (pairs_.empty()) return false;
    return supertypes(sub).contains(super);
  }

  friend bool operator==(const Taxonomy& a, const Taxonomy& b) {
    return a.pairs_ == b.pairs_;
  }

 private:
  const std::set<std::string>& supertypes(const std::string& name) const {
    auto it = up_.find(name);
    if (it != up_.end()) return it->second;
    std::set<std::string> seen{name};
    std::vector<std::string> work{name};
    while (!work.empty()) {
      std::string cur = std::move(work.back());
      work.pop_back();
      for (auto p = pairs_.lower_bound({cur, std::string()});
           p != pairs_.end() && p->first == cur; ++p)
        if (seen.insert(p->second).second) work.push_back(p->second);
    }
    return up_.emplace(name, std::move(seen)).first->second;
  }

  std::set<std::pair<std::string, std::string>> pairs_;
  mutable std::map<std::string, std::set<std::string>> up_;
};

namespace detail {

bool subtype_component(const std::vector<Type>& lhs, const Type& rhs,
                       const Taxonomy& tax);

inline bool subtype_impl(const Type& lhs, const Type& rhs,
                         const Taxonomy& tax) {
  std::vector<Type> left = components(lhs);
  for (const Type& r : components(rhs))
    if (!subtype_component(left, r, tax)) return false;
  return true;
}

inline bool subtype_component(const std::vector<Type>& lhs, const Type& rhs,
                              const Taxonomy& tax) {
  switch (rhs.kind()) {
    case Type::Kind::Variable:
      throw ValidationError("subtyping on open type: variable '" + rhs.name() +
                            "'");
    case Type::Kind::Constant:
      for (const Type& l : lhs) {
        if (l.is(Type::Kind::Variable))
          throw ValidationError("subtyping on open type: variable '" +
                                l.name() + "'");
        if (l.is(Type::Kind::Constant) && tax.leq(l.name(), rhs.name()))
          return true;
      }
      return false;
    case Type::Kind::Constructor:
      for (const Type& l : lhs) {
        if (!l.is(Type::Kind::Constructor) || l.name() != rhs.name()) continue;
        if (l.children().size() != rhs.children().size())
          throw ValidationError("constructor '" + rhs.name() +
                                "' used with arities " +
                                std::to_string(l.children().size()) + " and " +
                                std::to_string(rhs.children().size()));
        bool all = true;
        for (std::size_t i = 0; all && i < rhs.children().size(); ++i)
          all = subtype_impl(l.children()[i], rhs.children()[i], tax);
        if (all) return true;
      }
      return false;
    case Type::Kind::Arrow: {
      // Collect targets of every arrow whose source accepts rhs's source;
      // their intersection must fit the target.
      std::vector<Type> targets;
      for (const Type& l : lhs)
        if (l.is(Type::Kind::Arrow) && subtype_impl(rhs.source(), l.source(), tax))
          targets.push_back(l.target());
      if (targets.empty()) return false;
      return subtype_impl(intersect_all(targets), rhs.target(), tax);
    }
    case Type::Kind::Intersection:
      break;  // components() never yields one
  }
  return false;
}

}  // namespace detail

/// Decides lhs <= rhs in BCD subtyping (without omega) extended with
/// covariant constructors and a taxonomy on constants.  Both types must be
/// closed.
inline bool is_subtype(const Type& lhs, const Type& rhs,
                       const Taxonomy& tax = {}) {
  return detail::subtype_impl(lhs, rhs, tax);
}

inline bool is_equivalent(const Type& a, const Type& b,
                          const Taxonomy& tax = {}) {
  return is_subtype(a, b, tax) && is_subtype(b, a, tax);
}

}  // namespace clssmt
