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

// Translation of tree grammars and structural constraints to SMT-LIB.
//
// A term is represented by two uninterpreted functions over heap-addressed
// vertices: `inhabitant` (0 for an application node, else a combinator
// index) and `ty` (the nonterminal a vertex is derived from).  Every
// production rule becomes
//
//   (ite (= (ty i) <nt>) (xor <alt1> ... <altm>) true)
//
// where each alternative pins the labels of its application spine and the
// nonterminals of its argument roots.  Quantified scripts state the rules
// for all i; finitized scripts instantiate them on a bounded vertex set.

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "clssmt/error.hpp"
#include "clssmt/grammar.hpp"
#include "clssmt/tables.hpp"

namespace clssmt {

// ---------------------------------------------------------------------------
// Tables

struct Tables {
  CombinatorTable combinators;
  NonterminalTable nonterminals;
};

/// Combinator indices by first appearance in `g` unless overridden; the
/// overrides must be injective and the result contiguous from 1.
/// Nonterminal ids always follow first appearance.
inline Tables assign_tables(const TreeGrammar& g,
                            const std::map<std::string, int>& overrides = {}) {
  std::vector<std::string> order = combinator_order(g);
  std::set<std::string> known(order.begin(), order.end());
  std::map<int, std::string> by_index;
  for (const auto& [name, index] : overrides) {
    if (!known.contains(name))
      throw ValidationError("index override for unknown combinator '" + name + "'");
    if (index < 1)
      throw ValidationError("index override for '" + name + "' must be >= 1");
    auto [it, fresh] = by_index.emplace(index, name);
    if (!fresh)
      throw ValidationError("index " + std::to_string(index) + " assigned to both '" +
                            it->second + "' and '" + name + "'");
  }
  if (!by_index.empty() && by_index.rbegin()->first > static_cast<int>(order.size()))
    throw ValidationError("index overrides are not contiguous: " +
                          std::to_string(by_index.rbegin()->first) + " exceeds the " +
                          std::to_string(order.size()) + " combinators");
  std::vector<std::string> rest;
  for (const auto& c : order)
    if (!overrides.contains(c)) rest.push_back(c);
  std::vector<std::string> names;
  std::size_t next = 0;
  for (int k = 1; k <= static_cast<int>(order.size()); ++k) {
    if (auto it = by_index.find(k); it != by_index.end())
      names.push_back(it->second);
    else
      names.push_back(rest.at(next++));
  }
  Tables t;
  t.combinators = CombinatorTable(names);
  t.nonterminals = NonterminalTable(nonterminal_order(g));
  return t;
}

/// Index file: one `<name> <index>` pair per line, `#` comments.
inline std::map<std::string, int> parse_index_overrides(std::string_view text) {
  std::map<std::string, int> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream fields(line);
    std::string name, extra;
    long long index = 0;
    if (!(fields >> name)) continue;
    if (!(fields >> index) || (fields >> extra))
      throw ParseError("expected '<combinator> <index>'", number, 0);
    if (index < 1 || index > std::numeric_limits<int>::max())
      throw ParseError("index must be a positive integer", number, 0);
    if (!out.emplace(name, static_cast<int>(index)).second)
      throw ParseError("combinator '" + name + "' listed twice", number, 0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Addresses

/// A vertex expression: a base (the bound variable `i` or a concrete vertex)
/// followed by child steps, innermost first.
class Address {
 public:
  static Address symbolic(std::string var = "i") {
    Address a;
    a.base_ = std::move(var);
    return a;
  }
  static Address vertex(std::uint64_t v) {
    Address a;
    a.base_ = v;
    return a;
  }

  Address left() const { return step('L'); }
  Address right() const { return step('R'); }

  bool is_symbolic() const { return std::holds_alternative<std::string>(base_); }

  std::uint64_t value() const {
    std::uint64_t v = std::get<std::uint64_t>(base_);
    for (char s : steps_) v = s == 'L' ? left_child(v) : right_child(v);
    return v;
  }

  /// `(leftChild (rightChild i))` for symbolic bases, a numeral otherwise.
  std::string str() const {
    if (!is_symbolic()) return std::to_string(value());
    std::string out = std::get<std::string>(base_);
    for (char s : steps_)
      out = std::string(s == 'L' ? "(leftChild " : "(rightChild ") + out + ")";
    return out;
  }

 private:
  Address step(char s) const {
    Address a = *this;
    a.steps_.push_back(s);
    return a;
  }

  std::variant<std::string, std::uint64_t> base_;
  std::string steps_;
};

inline std::string inhabitant_eq(const Address& a, long long label) {
  return "(= (inhabitant " + a.str() + ") " + std::to_string(label) + ")";
}

inline std::string ty_eq(const Address& a, long long id) {
  return "(= (ty " + a.str() + ") " + std::to_string(id) + ")";
}

// ---------------------------------------------------------------------------
// Grammar translation

/// Conjunction pinning combinator `c` with argument nonterminals `args` at the
/// subtree rooted in `root`: walking the reversed argument list, each
/// application node gets label 0 and its right child the argument's
/// nonterminal; the leftmost leaf gets the combinator index.
inline std::string translate_combinator(const std::string& combinator,
                                        const std::vector<std::string>& args,
                                        const Tables& tables,
                                        const Address& root = Address::symbolic()) {
  int c = tables.combinators.index(combinator);
  std::vector<std::string> parts;
  Address cur = root;
  for (auto it = args.rbegin(); it != args.rend(); ++it) {
    parts.push_back(inhabitant_eq(cur, 0));
    parts.push_back(ty_eq(cur.right(), tables.nonterminals.index(*it)));
    cur = cur.left();
  }
  std::string head = inhabitant_eq(cur, c);
  if (parts.empty()) return head;
  std::string out = "(and " + head;
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

struct TranslateOptions {
  /// Replace n-ary xor by "at least one and pairwise exclusive".
  bool exactly_one = false;
};

/// `(ite (= (ty root) id) (xor e1 ... em) true)`; a single alternative
/// appears without the xor.
inline std::string translate_production_rule(const std::string& nt,
                                             const std::set<Alternative>& alternatives,
                                             const Tables& tables,
                                             const Address& root = Address::symbolic(),
                                             const TranslateOptions& opts = {}) {
  if (alternatives.empty())
    throw ValidationError("nonterminal '" + nt + "' has no alternatives");
  std::vector<std::string> es;
  for (const auto& a : alternatives)
    es.push_back(translate_combinator(a.combinator, a.args, tables, root));
  std::string body;
  if (es.size() == 1) {
    body = es[0];
  } else if (!opts.exactly_one) {
    body = "(xor";
    for (const auto& e : es) body += " " + e;
    body += ")";
  } else {
    body = "(and (or";
    for (const auto& e : es) body += " " + e;
    body += ")";
    for (std::size_t a = 0; a < es.size(); ++a)
      for (std::size_t b = a + 1; b < es.size(); ++b)
        body += " (not (and " + es[a] + " " + es[b] + "))";
    body += ")";
  }
  return "(ite " + ty_eq(root, tables.nonterminals.index(nt)) + " " + body +
         " true)";
}

// ---------------------------------------------------------------------------
// Structural constraints

struct Forbid { std::string combinator; };
struct NeverApplied { std::string combinator; };
struct LeafArgument { std::string combinator; std::size_t position; };
struct ForbidCompose { std::string outer; std::string inner; };
struct UseCount {
  std::string combinator;
  std::size_t min;
  std::optional<std::size_t> max;  // nullopt = unbounded
};
struct RawConstraint { std::string smt; };

using StructuralConstraint =
    std::variant<Forbid, NeverApplied, LeafArgument, ForbidCompose, UseCount,
                 RawConstraint>;

/// Constraint file: one directive per line, `#` comments.
///
///   forbid <c> | never-applied <c> | leaf-arg <c> <k> |
///   forbid-compose <outer> <inner> | use-count <c> <min> <max|inf> |
///   raw <smt s-expression>
inline std::vector<StructuralConstraint> parse_constraints(std::string_view text) {
  std::vector<StructuralConstraint> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  auto number_of = [&](const std::string& s, const char* what) -> std::size_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError(std::string("expected a natural number for ") + what +
                           ", found '" + s + "'",
                       number, 0);
    return std::stoull(s);
  };
  while (std::getline(in, line)) {
    ++number;
    std::string directive;
    std::istringstream fields(line);
    if (!(fields >> directive) || directive[0] == '#') continue;
    if (directive == "raw") {
      std::string rest;
      std::getline(fields, rest);
      std::size_t b = rest.find_first_not_of(" \t");
      if (b == std::string::npos)
        throw ParseError("raw needs an s-expression", number, 0);
      out.push_back(RawConstraint{rest.substr(b)});
      continue;
    }
    if (auto h = line.find('#'); h != std::string::npos) {
      line.resize(h);
      fields = std::istringstream(line);
      fields >> directive;
    }
    std::vector<std::string> args;
    for (std::string a; fields >> a;) args.push_back(a);
    auto want = [&](std::size_t n) {
      if (args.size() != n)
        throw ParseError("'" + directive + "' takes " + std::to_string(n) +
                             " argument(s), got " + std::to_string(args.size()),
                         number, 0);
    };
    if (directive == "forbid") {
      want(1);
      out.push_back(Forbid{args[0]});
    } else if (directive == "never-applied") {
      want(1);
      out.push_back(NeverApplied{args[0]});
    } else if (directive == "leaf-arg") {
      want(2);
      std::size_t k = number_of(args[1], "leaf-arg position");
      if (k < 1) throw ParseError("leaf-arg position must be >= 1", number, 0);
      out.push_back(LeafArgument{args[0], k});
    } else if (directive == "forbid-compose") {
      want(2);
      out.push_back(ForbidCompose{args[0], args[1]});
    } else if (directive == "use-count") {
      want(3);
      std::size_t lo = number_of(args[1], "use-count minimum");
      std::optional<std::size_t> hi;
      if (args[2] != "inf") hi = number_of(args[2], "use-count maximum");
      if (hi && *hi < lo)
        throw ParseError("use-count minimum exceeds maximum", number, 0);
      out.push_back(UseCount{args[0], lo, hi});
    } else {
      throw ParseError("unknown directive '" + directive + "'", number, 0);
    }
  }
  return out;
}

inline std::string to_string(const StructuralConstraint& c) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Forbid>) return "forbid " + x.combinator;
        if constexpr (std::is_same_v<T, NeverApplied>)
          return "never-applied " + x.combinator;
        if constexpr (std::is_same_v<T, LeafArgument>)
          return "leaf-arg " + x.combinator + " " + std::to_string(x.position);
        if constexpr (std::is_same_v<T, ForbidCompose>)
          return "forbid-compose " + x.outer + " " + x.inner;
        if constexpr (std::is_same_v<T, UseCount>)
          return "use-count " + x.combinator + " " + std::to_string(x.min) + " " +
                 (x.max ? std::to_string(*x.max) : std::string("inf"));
        if constexpr (std::is_same_v<T, RawConstraint>) return "raw " + x.smt;
      },
      c);
}

/// Body of a per-vertex constraint at `i`; nullopt for constraints that are
/// not stated per vertex (UseCount, Raw).
inline std::optional<std::string> constraint_body(const StructuralConstraint& c,
                                                  const Tables& tables,
                                                  const Address& i) {
  const auto& cs = tables.combinators;
  return std::visit(
      [&](const auto& x) -> std::optional<std::string> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Forbid>) {
          return "(not " + inhabitant_eq(i, cs.index(x.combinator)) + ")";
        } else if constexpr (std::is_same_v<T, NeverApplied>) {
          return "(not " + inhabitant_eq(i.left(), cs.index(x.combinator)) + ")";
        } else if constexpr (std::is_same_v<T, LeafArgument>) {
          // i is the k-th application above the combinator leaf; its right
          // child is argument k.
          Address leaf = i;
          for (std::size_t k = 0; k < x.position; ++k) leaf = leaf.left();
          return "(ite " + inhabitant_eq(leaf, cs.index(x.combinator)) +
                 " (not " + inhabitant_eq(i.right(), 0) + ") true)";
        } else if constexpr (std::is_same_v<T, ForbidCompose>) {
          return "(not (and " + inhabitant_eq(i.left(), cs.index(x.outer)) + " " +
                 inhabitant_eq(i.right().left(), cs.index(x.inner)) + "))";
        } else {
          return std::nullopt;
        }
      },
      c);
}

inline void check_constraint_names(const StructuralConstraint& c,
                                   const Tables& tables) {
  auto need = [&](const std::string& n) {
    if (!tables.combinators.contains(n))
      throw ValidationError("constraint '" + to_string(c) +
                            "' names unknown combinator '" + n + "'");
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ForbidCompose>) {
          need(x.outer);
          need(x.inner);
        } else if constexpr (!std::is_same_v<T, RawConstraint>) {
          need(x.combinator);
        }
      },
      c);
}

// ---------------------------------------------------------------------------
// Scripts

enum class Mode { Quantified, Finitized };

/// Which vertices a finitized script instantiates.
enum class Instantiation {
  /// Every vertex of the complete binary tree of the given depth.
  Full,
  /// Only vertices some word of depth <= d can occupy, with the rules of the
  /// nonterminals that can be derived there.
  Reachable,
};

struct SmtScript {
  Mode mode = Mode::Quantified;
  std::size_t depth = 0;  // finitized only
  std::vector<std::string> preamble;
  std::vector<std::string> assertions;
  /// Finitized only: instantiated vertices, ascending.  Models are read back
  /// on exactly these.
  std::vector<std::uint64_t> vertices;
  Tables tables;
  std::string goal;

  /// The script without (check-sat).
  std::string body() const {
    std::string out;
    for (const auto& l : preamble) out += l + "\n";
    for (const auto& a : assertions) out += a + "\n";
    return out;
  }
  std::string text() const { return body() + "(check-sat)\n"; }
};

struct ScriptOptions {
  Mode mode = Mode::Finitized;
  std::size_t depth = 4;
  Instantiation instantiation = Instantiation::Full;
  TranslateOptions translate;
};

namespace detail {

// Candidate nonterminals per vertex for words of depth <= `depth`.
inline std::map<std::uint64_t, std::set<std::string>> reachable_vertices(
    const TreeGrammar& g, const std::string& goal, std::size_t depth) {
  std::map<std::uint64_t, std::set<std::string>> cand;
  cand[1].insert(goal);
  const std::uint64_t limit = (std::uint64_t{1} << (depth + 1)) - 1;
  // Ascending addresses visit parents before children.
  for (auto it = cand.begin(); it != cand.end(); ++it) {
    std::uint64_t v = it->first;
    for (const auto& nt : std::set<std::string>(it->second)) {
      auto rules = g.rules.find(nt);
      if (rules == g.rules.end()) continue;
      for (const auto& alt : rules->second) {
        std::size_t n = alt.args.size();
        for (std::size_t j = 1; j <= n; ++j) {
          std::uint64_t spine = v << j;
          if (spine > limit) break;
          cand[spine];
        }
        for (std::size_t k = 1; k <= n; ++k) {
          std::uint64_t arg_root = right_child(v << (n - k));
          if (arg_root <= limit) cand[arg_root].insert(alt.args[k - 1]);
        }
      }
    }
  }
  return cand;
}

}  // namespace detail

/// Compiles constraints into assertions for `script` (appended).  Consecutive
/// ForbidCompose constraints share one conjunction.
inline void append_constraints(SmtScript& script,
                               const std::vector<StructuralConstraint>& constraints) {
  const Tables& tables = script.tables;
  for (const auto& c : constraints) check_constraint_names(c, tables);

  auto per_vertex = [&](const std::vector<std::string>& bodies_at_i,
                        auto&& body_at) {
    if (script.mode == Mode::Quantified) {
      std::string body = bodies_at_i.size() == 1 ? bodies_at_i[0] : [&] {
        std::string s = "(and";
        for (const auto& b : bodies_at_i) s += " " + b;
        return s + ")";
      }();
      script.assertions.push_back("(assert (forall ((i Int)) " + body + "))");
    } else {
      for (std::uint64_t v : script.vertices)
        script.assertions.push_back("(assert " + body_at(v) + ")");
    }
  };

  bool occupancy_declared = false;
  for (std::size_t idx = 0; idx < constraints.size();) {
    const auto& c = constraints[idx];
    if (std::holds_alternative<ForbidCompose>(c)) {
      std::size_t end = idx;
      while (end < constraints.size() &&
             std::holds_alternative<ForbidCompose>(constraints[end]))
        ++end;
      auto bodies = [&](const Address& a) {
        std::vector<std::string> out;
        for (std::size_t k = idx; k < end; ++k)
          out.push_back(*constraint_body(constraints[k], tables, a));
        return out;
      };
      per_vertex(bodies(Address::symbolic()), [&](std::uint64_t v) {
        auto bs = bodies(Address::vertex(v));
        if (bs.size() == 1) return bs[0];
        std::string s = "(and";
        for (const auto& b : bs) s += " " + b;
        return s + ")";
      });
      idx = end;
      continue;
    }
    if (const auto* raw = std::get_if<RawConstraint>(&c)) {
      std::string s = raw->smt;
      script.assertions.push_back(s.starts_with("(assert") ? s : "(assert " + s + ")");
    } else if (const auto* uc = std::get_if<UseCount>(&c)) {
      if (script.mode != Mode::Finitized)
        throw ValidationError("use-count constraints need a finitized script");
      if (!occupancy_declared) {
        // occupied(v): v lies on the term, i.e. every ancestor is an
        // application node.
        script.assertions.push_back("(declare-fun occupied (Int) Bool)");
        for (std::uint64_t v : script.vertices) {
          if (v == 1) {
            script.assertions.push_back("(assert (occupied 1))");
          } else {
            std::uint64_t p = v / 2;
            script.assertions.push_back(
                "(assert (= (occupied " + std::to_string(v) + ") (and (occupied " +
                std::to_string(p) + ") " + inhabitant_eq(Address::vertex(p), 0) +
                ")))");
          }
        }
        occupancy_declared = true;
      }
      int id = tables.combinators.index(uc->combinator);
      std::string sum = "(+ 0";
      for (std::uint64_t v : script.vertices)
        sum += " (ite (and (occupied " + std::to_string(v) + ") " +
               inhabitant_eq(Address::vertex(v), id) + ") 1 0)";
      sum += ")";
      script.assertions.push_back("(assert (<= " + std::to_string(uc->min) + " " +
                                  sum + "))");
      if (uc->max)
        script.assertions.push_back("(assert (<= " + sum + " " +
                                    std::to_string(*uc->max) + "))");
    } else {
      per_vertex({*constraint_body(c, tables, Address::symbolic())},
                 [&](std::uint64_t v) {
                   return *constraint_body(c, tables, Address::vertex(v));
                 });
    }
    ++idx;
  }
}

/// The full script for words of `goal`: child functions, the two labelling
/// functions, one rule assertion per nonterminal (per vertex when
/// finitized), the root constraint and the structural constraints.
inline SmtScript translate_grammar(const TreeGrammar& g, const std::string& goal,
                                   const Tables& tables,
                                   const ScriptOptions& opts = {},
                                   const std::vector<StructuralConstraint>& constraints = {}) {
  bool empty_goal = !g.has(goal) || g.alternatives(goal).empty();
  if (empty_goal && !(goal == g.start && g.empty()))
    throw ValidationError("unknown goal nonterminal '" + goal + "'");
  if (opts.mode == Mode::Finitized && opts.depth > 60)
    throw ValidationError("finitization depth must be at most 60");

  SmtScript s;
  s.mode = opts.mode;
  s.depth = opts.depth;
  s.tables = tables;
  s.goal = goal;

  s.preamble.push_back("; inhabitants of " + goal);
  s.preamble.push_back(opts.mode == Mode::Quantified ? "(set-logic UFLIA)"
                                                     : "(set-logic QF_UFLIA)");
  s.preamble.push_back("(define-fun leftChild ((i Int)) Int (* 2 i))");
  s.preamble.push_back("(define-fun rightChild ((i Int)) Int (+ (* 2 i) 1))");
  s.preamble.push_back("(declare-fun inhabitant (Int) Int)");
  s.preamble.push_back("(declare-fun ty (Int) Int)");

  if (opts.mode == Mode::Quantified) {
    for (const auto& nt : tables.nonterminals.names()) {
      if (!g.has(nt) || g.alternatives(nt).empty()) continue;
      s.assertions.push_back(
          "(assert (forall ((i Int)) " +
          translate_production_rule(nt, g.alternatives(nt), tables,
                                    Address::symbolic(), opts.translate) +
          "))");
    }
  } else {
    std::map<std::uint64_t, std::set<std::string>> cand;
    if (opts.instantiation == Instantiation::Reachable && !empty_goal) {
      cand = detail::reachable_vertices(g, goal, opts.depth);
    } else {
      std::set<std::string> all;
      for (const auto& [nt, alts] : g.rules)
        if (!alts.empty()) all.insert(nt);
      const std::uint64_t limit = (std::uint64_t{1} << (opts.depth + 1)) - 1;
      for (std::uint64_t v = 1; v <= limit; ++v) cand[v] = all;
    }
    for (const auto& [v, nts] : cand) {
      s.vertices.push_back(v);
      // Rules in nonterminal-id order for stable output.
      for (const auto& nt : tables.nonterminals.names())
        if (nts.contains(nt))
          s.assertions.push_back(
              "(assert " +
              translate_production_rule(nt, g.alternatives(nt), tables,
                                        Address::vertex(v), opts.translate) +
              ")");
    }
    // An application node whose children fall outside the instantiated
    // vertices would describe the top of a deeper term; without this every
    // such prefix is a model to decode, reject and block.
    std::set<std::uint64_t> inside(s.vertices.begin(), s.vertices.end());
    bool first = true;
    for (std::uint64_t v : s.vertices) {
      if (inside.contains(left_child(v)) && inside.contains(right_child(v))) continue;
      if (first) s.assertions.push_back("; vertices on the frontier are leaves");
      first = false;
      s.assertions.push_back("(assert (not " + inhabitant_eq(Address::vertex(v), 0) + "))");
    }
  }

  if (empty_goal) {
    s.assertions.push_back("; the goal has no productions: no word exists");
    s.assertions.push_back("(assert false)");
  } else {
    s.assertions.push_back("(assert " +
                           ty_eq(Address::vertex(1), tables.nonterminals.index(goal)) +
                           ")");
  }
  append_constraints(s, constraints);
  return s;
}

/// Query asking whether two alternatives of one rule can hold together at
/// vertex 1; a sound translation makes it unsatisfiable.
inline std::string exclusivity_query(const Alternative& a, const Alternative& b,
                                     const Tables& tables) {
  std::string out;
  out += "(set-logic QF_UFLIA)\n";
  out += "(define-fun leftChild ((i Int)) Int (* 2 i))\n";
  out += "(define-fun rightChild ((i Int)) Int (+ (* 2 i) 1))\n";
  out += "(declare-fun inhabitant (Int) Int)\n";
  out += "(declare-fun ty (Int) Int)\n";
  out += "(assert (and " +
         translate_combinator(a.combinator, a.args, tables, Address::vertex(1)) +
         " " + translate_combinator(b.combinator, b.args, tables, Address::vertex(1)) +
         "))\n";
  out += "(check-sat)\n";
  return out;
}

}  // namespace clssmt
