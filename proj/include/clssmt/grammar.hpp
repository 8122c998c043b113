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

// Regular tree grammars over combinator symbols, applicative terms, and the
// binary inhabitant-tree layout of terms.
//
// Layout: a combinator applied to n arguments becomes n application nodes
// (label 0) stacked along the left spine with the combinator index at the
// leftmost leaf; argument k is the right child of the k-th application node
// counted from the leaf.  Vertices are heap addressed: the root is 1 and the
// children of v are 2v and 2v+1.  "Depth" of a term always means the height
// of this binary tree (a bare combinator has depth 0).

#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clssmt/error.hpp"
#include "clssmt/tables.hpp"
#include "json.hpp"

namespace clssmt {

// ---------------------------------------------------------------------------
// Grammar

struct Alternative {
  std::string combinator;
  std::vector<std::string> args;  // nonterminal ids

  auto operator<=>(const Alternative&) const = default;
};

/// Normalized regular tree grammar.  Nonterminal ids are canonical type
/// texts; `display` keeps a human-facing rendering of each.
struct TreeGrammar {
  std::string start;
  std::map<std::string, std::set<Alternative>> rules;
  std::map<std::string, std::string> display;

  bool empty() const { return rules.empty(); }

  bool has(std::string_view nt) const {
    return rules.find(std::string(nt)) != rules.end();
  }

  const std::set<Alternative>& alternatives(std::string_view nt) const {
    auto it = rules.find(std::string(nt));
    if (it == rules.end())
      throw ValidationError("unknown nonterminal '" + std::string(nt) + "'");
    return it->second;
  }

  std::size_t rule_count() const {
    std::size_t n = 0;
    for (const auto& [nt, alts] : rules) n += alts.size();
    return n;
  }

  friend bool operator==(const TreeGrammar&, const TreeGrammar&) = default;
};

inline std::string to_string(const Alternative& a) {
  std::string out = a.combinator + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i)
    out += (i ? ", " : "") + a.args[i];
  return out + ")";
}

/// One `nt ↦ { alt, ... }` line per nonterminal.
inline std::string print_grammar(const TreeGrammar& g) {
  std::ostringstream out;
  out << "start: " << g.start << "\n";
  for (const auto& [nt, alts] : g.rules) {
    out << nt << " ↦ {";
    bool first = true;
    for (const auto& a : alts) {
      out << (first ? " " : ", ") << to_string(a);
      first = false;
    }
    out << " }\n";
  }
  return out.str();
}

/// Combinators in order of first appearance, walking nonterminals breadth
/// first from the start symbol (alternatives in their sorted order), then any
/// remaining rules.
inline std::vector<std::string> combinator_order(const TreeGrammar& g);
inline std::vector<std::string> nonterminal_order(const TreeGrammar& g);

namespace detail {

inline void first_appearance(const TreeGrammar& g,
                             std::vector<std::string>& nts,
                             std::vector<std::string>& combinators) {
  std::set<std::string> seen_nt, seen_c;
  std::deque<std::string> queue;
  auto visit_nt = [&](const std::string& nt) {
    if (seen_nt.insert(nt).second) {
      nts.push_back(nt);
      queue.push_back(nt);
    }
  };
  if (!g.start.empty() && (g.has(g.start) || g.rules.empty())) visit_nt(g.start);
  auto drain = [&] {
    while (!queue.empty()) {
      std::string nt = queue.front();
      queue.pop_front();
      auto it = g.rules.find(nt);
      if (it == g.rules.end()) continue;
      for (const auto& alt : it->second) {
        if (seen_c.insert(alt.combinator).second)
          combinators.push_back(alt.combinator);
        for (const auto& a : alt.args) visit_nt(a);
      }
    }
  };
  drain();
  for (const auto& [nt, alts] : g.rules) {
    visit_nt(nt);
    drain();
  }
}

}  // namespace detail

inline std::vector<std::string> combinator_order(const TreeGrammar& g) {
  std::vector<std::string> nts, cs;
  detail::first_appearance(g, nts, cs);
  return cs;
}

inline std::vector<std::string> nonterminal_order(const TreeGrammar& g) {
  std::vector<std::string> nts, cs;
  detail::first_appearance(g, nts, cs);
  return nts;
}

// ---------------------------------------------------------------------------
// Terms

/// Applicative term c(t1, ..., tn), i.e. (...((c t1) t2) ... tn).
struct Term {
  std::string combinator;
  std::vector<Term> args;

  Term() = default;
  explicit Term(std::string c, std::vector<Term> a = {})
      : combinator(std::move(c)), args(std::move(a)) {}

  std::strong_ordering operator<=>(const Term& other) const {
    if (auto c = combinator <=> other.combinator; c != 0) return c;
    return std::lexicographical_compare_three_way(
        args.begin(), args.end(), other.args.begin(), other.args.end());
  }
  bool operator==(const Term& other) const {
    return combinator == other.combinator && args == other.args;
  }
};

/// Curried s-expression: ((min default) ((sortmap inv) values)).
inline std::string to_sexpr(const Term& t) {
  std::string out = t.combinator;
  for (const auto& a : t.args) out = "(" + out + " " + to_sexpr(a) + ")";
  return out;
}

/// Function-call sugar: min(default, sortmap(inv, values)).
inline std::string to_sugar(const Term& t) {
  if (t.args.empty()) return t.combinator;
  std::string out = t.combinator + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i)
    out += (i ? ", " : "") + to_sugar(t.args[i]);
  return out + ")";
}

namespace detail {

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  Term parse_all() {
    Term t = parse();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& m) const {
    throw ParseError("term: " + m, 1, pos_ + 1);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  static bool ident(unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '\'' || c == '.' || c == '-' ||
           c >= 0x80;
  }
  std::string name() {
    skip();
    std::size_t b = pos_;
    while (pos_ < text_.size() && ident(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (b == pos_) fail(pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'"
                                            : "unexpected end of input");
    return std::string(text_.substr(b, pos_ - b));
  }

  // term ::= name [ "(" term ("," term)* ")" ] | "(" term term+ ")"
  Term parse() {
    if (peek('(')) {
      ++pos_;
      Term head = parse();
      bool any = false;
      while (!peek(')')) {
        if (pos_ >= text_.size()) fail("expected ')'");
        head.args.push_back(parse());
        any = true;
      }
      ++pos_;
      if (!any) fail("application needs an argument");
      return head;
    }
    Term t(name());
    // Call syntax needs the parenthesis right after the name; `(f (g x))`
    // is an application.
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      if (peek(')')) {  // c() is the bare combinator
        ++pos_;
        return t;
      }
      t.args.push_back(parse());
      while (peek(',')) {
        ++pos_;
        t.args.push_back(parse());
      }
      if (!peek(')')) fail("expected ',' or ')'");
      ++pos_;
    }
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Accepts both the curried s-expression and the function-call sugar.
inline Term parse_term(std::string_view text) {
  return detail::TermParser(text).parse_all();
}

/// Height of the inhabitant tree of `t`.
inline std::size_t layout_depth(const Term& t) {
  std::size_t n = t.args.size();
  std::size_t d = n;
  for (std::size_t k = 1; k <= n; ++k)
    d = std::max(d, n - k + 1 + layout_depth(t.args[k - 1]));
  return d;
}

// ---------------------------------------------------------------------------
// Language

namespace detail {

class Membership {
 public:
  explicit Membership(const TreeGrammar& g) : g_(g) {}

  bool check(const std::string& nt, const Term& t) {
    auto key = std::make_pair(nt, &t);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool result = false;
    auto rules = g_.rules.find(nt);
    if (rules != g_.rules.end()) {
      for (const auto& alt : rules->second) {
        if (alt.combinator != t.combinator || alt.args.size() != t.args.size())
          continue;
        bool all = true;
        for (std::size_t k = 0; all && k < alt.args.size(); ++k)
          all = check(alt.args[k], t.args[k]);
        if (all) {
          result = true;
          break;
        }
      }
    }
    memo_.emplace(key, result);
    return result;
  }

 private:
  const TreeGrammar& g_;
  std::map<std::pair<std::string, const Term*>, bool> memo_;
};

}  // namespace detail

/// t ∈ L_nt(g).
inline bool member(const TreeGrammar& g, std::string_view nt, const Term& t) {
  if (!g.has(nt))
    throw ValidationError("unknown nonterminal '" + std::string(nt) + "'");
  return detail::Membership(g).check(std::string(nt), t);
}

/// Smallest layout depth of any word of L_nt(g); nullopt if the language is
/// empty.
inline std::optional<std::size_t> min_layout_depth(const TreeGrammar& g,
                                                   std::string_view nt) {
  std::map<std::string, std::size_t> best;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [lhs, alts] : g.rules) {
      for (const auto& alt : alts) {
        std::size_t n = alt.args.size();
        std::size_t d = n;
        bool ok = true;
        for (std::size_t k = 1; ok && k <= n; ++k) {
          auto it = best.find(alt.args[k - 1]);
          if (it == best.end())
            ok = false;
          else
            d = std::max(d, n - k + 1 + it->second);
        }
        if (!ok) continue;
        auto it = best.find(lhs);
        if (it == best.end() || d < it->second) {
          best[lhs] = d;
          changed = true;
        }
      }
    }
  }
  auto it = best.find(std::string(nt));
  if (it == best.end()) return std::nullopt;
  return it->second;
}

namespace detail {

class WordEnumerator {
 public:
  WordEnumerator(const TreeGrammar& g, std::size_t cap) : g_(g), cap_(cap) {}

  const std::vector<Term>& words(const std::string& nt, std::size_t depth) {
    auto key = std::make_pair(nt, depth);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::set<Term> out;
    if (auto rules = g_.rules.find(nt); rules != g_.rules.end()) {
      for (const auto& alt : rules->second) {
        std::size_t n = alt.args.size();
        if (n > depth) continue;
        std::vector<const std::vector<Term>*> choices;
        bool empty = false;
        for (std::size_t k = 1; k <= n; ++k) {
          choices.push_back(&words(alt.args[k - 1], depth - (n - k + 1)));
          if (choices.back()->empty()) empty = true;
        }
        if (empty) continue;
        std::vector<std::size_t> pick(n, 0);
        while (true) {
          Term t(alt.combinator);
          for (std::size_t k = 0; k < n; ++k) t.args.push_back((*choices[k])[pick[k]]);
          out.insert(std::move(t));
          if (out.size() > cap_)
            throw CapacityError("word enumeration exceeded " +
                                std::to_string(cap_) + " terms at '" + nt + "'");
          std::size_t k = n;
          while (k > 0 && ++pick[k - 1] == choices[k - 1]->size()) {
            pick[k - 1] = 0;
            --k;
          }
          if (k == 0) break;
        }
      }
    }
    return memo_.emplace(key, std::vector<Term>(out.begin(), out.end()))
        .first->second;
  }

 private:
  const TreeGrammar& g_;
  std::size_t cap_;
  std::map<std::pair<std::string, std::size_t>, std::vector<Term>> memo_;
};

inline void preorder_key(const Term& t, const std::map<std::string, int>& index,
                         std::vector<int>& key) {
  auto it = index.find(t.combinator);
  key.push_back(it == index.end() ? 0 : it->second);
  key.push_back(static_cast<int>(t.args.size()));
  for (const auto& a : t.args) preorder_key(a, index, key);
}

}  // namespace detail

/// Sorts terms by layout depth, then lexicographically by the preorder
/// sequence of (combinator index, arity); indices follow combinator_order(g).
inline void sort_words(const TreeGrammar& g, std::vector<Term>& words) {
  std::map<std::string, int> index;
  for (const auto& c : combinator_order(g))
    index.emplace(c, static_cast<int>(index.size()) + 1);
  std::vector<std::pair<std::pair<std::size_t, std::vector<int>>, Term>> keyed;
  for (auto& w : words) {
    std::vector<int> key;
    detail::preorder_key(w, index, key);
    keyed.push_back({{layout_depth(w), std::move(key)}, std::move(w)});
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  words.clear();
  for (auto& k : keyed) words.push_back(std::move(k.second));
}

/// All words of L_nt(g) with layout depth <= max_depth, in deterministic
/// order, truncated to `limit`.  The full bounded language is materialized;
/// CapacityError is thrown beyond `cap` terms.
inline std::vector<Term> enumerate_words(const TreeGrammar& g,
                                         std::string_view nt,
                                         std::size_t max_depth,
                                         std::size_t limit = SIZE_MAX,
                                         std::size_t cap = 2'000'000) {
  detail::WordEnumerator e(g, cap);
  std::vector<Term> out = e.words(std::string(nt), max_depth);
  sort_words(g, out);
  if (out.size() > limit) out.resize(limit);
  return out;
}

// ---------------------------------------------------------------------------
// Inhabitant-tree layout

/// Vertex address -> label (0 for application, else a combinator index).
using VertexLayout = std::map<std::uint64_t, std::int64_t>;

inline std::uint64_t left_child(std::uint64_t v) { return 2 * v; }
inline std::uint64_t right_child(std::uint64_t v) { return 2 * v + 1; }

inline std::size_t vertex_level(std::uint64_t v) {
  std::size_t level = 0;
  while (v > 1) {
    v >>= 1;
    ++level;
  }
  return level;
}

namespace detail {

constexpr std::uint64_t kMaxAddress = std::uint64_t{1} << 62;

inline void place(const Term& t, std::uint64_t v, const CombinatorTable& table,
                  VertexLayout& out) {
  std::size_t n = t.args.size();
  if (n >= 62 || v > (kMaxAddress >> n))
    throw Error("term too deep for 64-bit vertex addresses");
  for (std::size_t k = 1; k <= n; ++k) {
    std::uint64_t app = v << (n - k);
    out[app] = 0;
    place(t.args[k - 1], right_child(app), table, out);
  }
  out[v << n] = table.index(t.combinator);
}

}  // namespace detail

inline VertexLayout layout(const Term& t, const CombinatorTable& table) {
  VertexLayout out;
  detail::place(t, 1, table, out);
  return out;
}

/// The vertices reached from the root by following application nodes, i.e.
/// the part of `v` that describes a term.  Labels elsewhere are ignored.
/// Throws MalformedTree when an application node lacks a child in `v` or a
/// reached label is negative.
inline VertexLayout occupied_region(const VertexLayout& v) {
  VertexLayout out;
  std::vector<std::uint64_t> work{1};
  while (!work.empty()) {
    std::uint64_t cur = work.back();
    work.pop_back();
    auto it = v.find(cur);
    if (it == v.end())
      throw MalformedTree("vertex " + std::to_string(cur) + " has no label");
    if (it->second < 0)
      throw MalformedTree("vertex " + std::to_string(cur) +
                          " has invalid label " + std::to_string(it->second));
    out.emplace(cur, it->second);
    if (it->second == 0) {
      if (cur >= detail::kMaxAddress)
        throw MalformedTree("tree exceeds 64-bit vertex addresses");
      work.push_back(right_child(cur));
      work.push_back(left_child(cur));
    }
  }
  return out;
}

/// Inverse of layout().  `v` must contain exactly the vertices of one tree.
inline Term delayout(const VertexLayout& v, const CombinatorTable& table) {
  VertexLayout region = occupied_region(v);
  if (region.size() != v.size()) {
    for (const auto& [vertex, label] : v)
      if (!region.contains(vertex))
        throw MalformedTree("vertex " + std::to_string(vertex) +
                            " is not part of the tree (its parent is not an "
                            "application node)");
  }
  // Rebuild recursively from the root.
  struct Builder {
    const VertexLayout& region;
    const CombinatorTable& table;
    Term build(std::uint64_t root) const {
      std::vector<std::uint64_t> arg_roots;
      std::uint64_t cur = root;
      while (region.at(cur) == 0) {
        arg_roots.push_back(right_child(cur));
        cur = left_child(cur);
      }
      std::int64_t label = region.at(cur);
      if (!table.has_index(label))
        throw MalformedTree("vertex " + std::to_string(cur) +
                            " has unknown combinator index " +
                            std::to_string(label));
      Term t(table.name(label));
      for (auto it = arg_roots.rbegin(); it != arg_roots.rend(); ++it)
        t.args.push_back(build(*it));
      return t;
    }
  };
  return Builder{region, table}.build(1);
}

/// Graphviz rendering with nodes labelled `name:(vertex,label)`, `@` for
/// application nodes.
inline std::string to_dot(const Term& t, const CombinatorTable& table,
                          std::string_view graph_name = "term") {
  VertexLayout l = layout(t, table);
  std::ostringstream out;
  out << "digraph " << graph_name << " {\n";
  for (const auto& [v, label] : l) {
    std::string name = label == 0 ? "@" : table.name(label);
    out << "  n" << v << " [label=\"" << name << ":(" << v << "," << label
        << ")\"];\n";
  }
  for (const auto& [v, label] : l)
    if (label == 0)
      out << "  n" << v << " -> n" << left_child(v) << ";\n  n" << v << " -> n"
          << right_child(v) << ";\n";
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// JSON

/// {"start": nt, "display": {nt: text}, "rules": {nt: [{"combinator": c,
/// "args": [nt, ...]}]}} with sorted keys and sorted alternatives.
inline std::string to_json(const TreeGrammar& g, int indent = 2) {
  nlohmann::json j;
  j["start"] = g.start;
  j["display"] = nlohmann::json::object();
  for (const auto& [nt, text] : g.display) j["display"][nt] = text;
  j["rules"] = nlohmann::json::object();
  for (const auto& [nt, alts] : g.rules) {
    auto arr = nlohmann::json::array();
    for (const auto& a : alts)
      arr.push_back({{"args", a.args}, {"combinator", a.combinator}});
    j["rules"][nt] = std::move(arr);
  }
  return j.dump(indent) + "\n";
}

inline TreeGrammar from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("grammar JSON: ") + e.what(), 0, 0);
  }
  auto bad = [](const std::string& m) -> ValidationError {
    return ValidationError("grammar JSON schema: " + m);
  };
  if (!j.is_object()) throw bad("top level must be an object");
  if (!j.contains("start") || !j["start"].is_string())
    throw bad("'start' must be a string");
  if (!j.contains("rules") || !j["rules"].is_object())
    throw bad("'rules' must be an object");
  TreeGrammar g;
  g.start = j["start"].get<std::string>();
  if (j.contains("display")) {
    if (!j["display"].is_object()) throw bad("'display' must be an object");
    for (const auto& [nt, text] : j["display"].items()) {
      if (!text.is_string()) throw bad("display of '" + nt + "' must be a string");
      g.display[nt] = text.get<std::string>();
    }
  }
  for (const auto& [nt, alts] : j["rules"].items()) {
    if (!alts.is_array()) throw bad("rules of '" + nt + "' must be an array");
    auto& set = g.rules[nt];
    for (const auto& a : alts) {
      if (!a.is_object() || !a.contains("combinator") ||
          !a["combinator"].is_string() || !a.contains("args") ||
          !a["args"].is_array())
        throw bad("alternative of '" + nt +
                  "' needs 'combinator' (string) and 'args' (array)");
      Alternative alt{a["combinator"].get<std::string>(), {}};
      for (const auto& arg : a["args"]) {
        if (!arg.is_string()) throw bad("arguments must be nonterminal strings");
        alt.args.push_back(arg.get<std::string>());
      }
      set.insert(std::move(alt));
    }
  }
  for (const auto& [nt, alts] : g.rules)
    for (const auto& a : alts)
      for (const auto& arg : a.args)
        if (!g.has(arg))
          throw bad("nonterminal '" + arg + "' used in '" + nt +
                    "' has no rules entry");
  if (!g.rules.empty() && !g.has(g.start))
    throw bad("start symbol '" + g.start + "' has no rules entry");
  return g;
}

}  // namespace clssmt
