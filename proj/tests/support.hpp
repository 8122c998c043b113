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

// Shared helpers for the test binaries: fixtures, golden grammars, random
// instances and running the command-line tool.

#pragma once

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "clssmt/clssmt.hpp"

namespace clssmt {

// Readable gtest failure messages.
inline void PrintTo(const Type& t, std::ostream* os) { *os << to_string(t); }
inline void PrintTo(const Term& t, std::ostream* os) { *os << to_sexpr(t); }

}  // namespace clssmt

namespace clssmt::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(CLSSMT_FIXTURES) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string fixture(const std::string& name) { return read_file(fixture_path(name)); }

inline Repository fixture_repo(const std::string& name) {
  return parse_repository(fixture(name));
}

// ---------------------------------------------------------------------------
// Golden grammars
//
// One left-hand side per line: `T := c(T1, T2) | d() | ...`.  Types are
// compared by canonical form, so a golden line names a nonterminal by its
// displayed type.  Repeated left-hand sides are merged by union.

using GrammarKeys = std::map<std::string, std::set<std::string>>;

inline std::vector<std::string> split_top_level(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    // `->` contains no separator we split on, but guard '|' inside parens.
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

inline std::string alternative_key(const std::string& combinator,
                                   const std::vector<std::string>& canonical_args) {
  std::string k = combinator + "(";
  for (std::size_t i = 0; i < canonical_args.size(); ++i)
    k += (i ? ", " : "") + canonical_args[i];
  return k + ")";
}

inline GrammarKeys parse_golden(const std::string& text) {
  GrammarKeys out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto sep = line.find(":=");
    if (sep == std::string::npos) throw Error("golden line without ':=': " + line);
    std::string lhs = canonical_string(parse_type(trim(line.substr(0, sep))));
    auto& alts = out[lhs];
    for (const auto& raw : split_top_level(line.substr(sep + 2), '|')) {
      std::string alt = trim(raw);
      auto open = alt.find('(');
      if (open == std::string::npos || alt.back() != ')')
        throw Error("golden alternative must be c(...): " + alt);
      std::string name = trim(alt.substr(0, open));
      std::string inner = alt.substr(open + 1, alt.size() - open - 2);
      std::vector<std::string> args;
      if (!trim(inner).empty())
        for (const auto& a : split_top_level(inner, ','))
          args.push_back(canonical_string(parse_type(trim(a))));
      alts.insert(alternative_key(name, args));
    }
  }
  return out;
}

inline GrammarKeys grammar_keys(const TreeGrammar& g) {
  GrammarKeys out;
  for (const auto& [nt, alts] : g.rules) {
    auto& dst = out[canonical_string(parse_type(nt))];
    for (const auto& a : alts) {
      std::vector<std::string> args;
      for (const auto& x : a.args) args.push_back(canonical_string(parse_type(x)));
      dst.insert(alternative_key(a.combinator, args));
    }
  }
  return out;
}

/// Human-readable symmetric difference, empty iff equal.
inline std::string describe_difference(const GrammarKeys& got, const GrammarKeys& want) {
  std::string out;
  std::set<std::string> lhs;
  for (const auto& [k, v] : got) lhs.insert(k);
  for (const auto& [k, v] : want) lhs.insert(k);
  for (const auto& nt : lhs) {
    auto g = got.count(nt) ? got.at(nt) : std::set<std::string>{};
    auto w = want.count(nt) ? want.at(nt) : std::set<std::string>{};
    for (const auto& a : g)
      if (!w.count(a)) out += "  extra   " + nt + " -> " + a + "\n";
    for (const auto& a : w)
      if (!g.count(a)) out += "  missing " + nt + " -> " + a + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random closed types and repositories

struct TypeGen {
  std::mt19937& rng;
  std::vector<std::string> atoms;
  std::vector<std::string> constructors = {};  // unary

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Type atom() { return Type::constant(atoms[static_cast<std::size_t>(pick(static_cast<int>(atoms.size())))]); }

  Type operator()(int depth) {
    if (depth <= 1) return atom();
    int choice = pick(constructors.empty() ? 3 : 4);
    switch (choice) {
      case 0: return atom();
      case 1: return Type::arrow((*this)(depth - 1), (*this)(depth - 1));
      case 2: return Type::intersection((*this)(depth - 1), (*this)(depth - 1));
      default:
        return Type::constructor(
            constructors[static_cast<std::size_t>(pick(static_cast<int>(constructors.size())))],
            {(*this)(depth - 1)});
    }
  }
};

/// A small repository over atoms a, b, c: up to 4 combinators of arity
/// 0..2, optionally one variable with a kind of up to 2 members.
inline Repository random_repository(std::mt19937& rng) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  const std::vector<std::string> atoms = {"a", "b", "c"};
  auto atom = [&] { return Type::constant(atoms[static_cast<std::size_t>(pick(3))]); };
  auto small = [&] {
    Type t = atom();
    if (pick(4) == 0) t = Type::intersection(t, atom());
    return t;
  };
  Repository repo;
  bool with_var = pick(2) == 0;
  if (with_var) {
    std::vector<Type> kind{small()};
    if (pick(2) == 0) kind.push_back(small());
    repo.variable_kinds["'x"] = kind;
  }
  int count = 2 + pick(3);  // 2..4
  // At least one leaf so that some language is nonempty.
  repo.combinators.push_back({"k0", small()});
  for (int i = 1; i < count; ++i) {
    int arity = pick(3);
    auto operand = [&]() -> Type {
      if (with_var && pick(3) == 0) return Type::variable("'x");
      return small();
    };
    Type t = operand();
    for (int k = 0; k < arity; ++k) t = Type::arrow(operand(), t);
    if (pick(5) == 0) t = Type::intersection(t, Type::arrow(small(), small()));
    repo.combinators.push_back({"c" + std::to_string(i), t});
  }
  return repo;
}

// ---------------------------------------------------------------------------
// Command-line tool

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout
};

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

inline CliResult run_cli(const std::vector<std::string>& args,
                         const std::string& env_prefix = "") {
  std::string cmd = env_prefix + shell_quote(CLSSMT_CLI);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>/dev/null";
  CliResult r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.output.append(buf, n);
  int status = ::pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace clssmt::testing
