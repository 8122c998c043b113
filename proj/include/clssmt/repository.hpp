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

// Combinator repositories.
//
// File format (UTF-8, line based, `#` starts a comment):
//
//   var <name> in { <type>, <type>, ... }
//   subtype <atom> <: <atom>
//   <combinator> : <type>
//
// A combinator type may continue on following lines; a new declaration
// starts at the next `var`, `subtype` or `<name> :` line.  Every `var`
// declaration applies to the whole file regardless of position.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clssmt/error.hpp"
#include "clssmt/types.hpp"

namespace clssmt {

struct Combinator {
  std::string name;
  Type type;
};

struct Repository {
  std::vector<Combinator> combinators;              // declaration order
  std::map<std::string, std::vector<Type>> variable_kinds;
  Taxonomy taxonomy;

  const Combinator* find(std::string_view name) const {
    for (const auto& c : combinators)
      if (c.name == name) return &c;
    return nullptr;
  }
};

struct Diagnostic {
  enum class Code {
    DuplicateName,
    UnboundVariableKind,
    EmptyKind,
    OpenKindMember,
    ConstructorArity,
  };
  Code code;
  std::string subject;  // the offending name
  std::string message;

  friend bool operator==(const Diagnostic& a, const Diagnostic& b) {
    return a.code == b.code && a.subject == b.subject;
  }
};

inline std::string to_string(Diagnostic::Code code) {
  switch (code) {
    case Diagnostic::Code::DuplicateName: return "DuplicateName";
    case Diagnostic::Code::UnboundVariableKind: return "UnboundVariableKind";
    case Diagnostic::Code::EmptyKind: return "EmptyKind";
    case Diagnostic::Code::OpenKindMember: return "OpenKindMember";
    case Diagnostic::Code::ConstructorArity: return "ConstructorArity";
  }
  return "?";
}

namespace detail {

struct RepoLine {
  std::size_t number;
  std::string text;  // comment stripped
};

inline std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline bool starts_with_word(std::string_view line, std::string_view word) {
  return line.starts_with(word) && line.size() > word.size() &&
         (line[word.size()] == ' ' || line[word.size()] == '\t');
}

// `name :` at the start of a line (but not `<:`).
inline std::optional<std::size_t> declaration_colon(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size()) {
    auto c = static_cast<unsigned char>(line[i]);
    if (std::isalnum(c) || c == '_' || c == '\'' || c == '.' || c >= 0x80)
      ++i;
    else
      break;
  }
  if (i == 0) return std::nullopt;
  std::size_t j = i;
  while (j < line.size() && (line[j] == ' ' || line[j] == '\t')) ++j;
  if (j < line.size() && line[j] == ':') return j;
  return std::nullopt;
}

}  // namespace detail

/// Parses the repository file format.  Throws ParseError on malformed lines or
/// types; semantic checks are left to validate().
inline Repository parse_repository(std::string_view text) {
  using detail::trim;
  std::vector<detail::RepoLine> lines;
  {
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view raw = text.substr(pos, end - pos);
      ++number;
      if (auto hash = raw.find('#'); hash != std::string_view::npos)
        raw = raw.substr(0, hash);
      lines.push_back({number, std::string(raw)});
      pos = end + 1;
    }
  }

  // Group continuation lines with the declaration above them.
  struct Decl {
    std::size_t line;
    std::size_t column;  // column where the text starts
    std::string text;
  };
  std::vector<Decl> decls;
  for (const auto& l : lines) {
    std::string t = trim(l.text);
    if (t.empty()) continue;
    std::size_t column = l.text.find_first_not_of(" \t") + 1;
    bool starts = detail::starts_with_word(t, "var") ||
                  detail::starts_with_word(t, "subtype") ||
                  detail::declaration_colon(t).has_value();
    if (starts || decls.empty()) {
      if (!starts)
        throw ParseError("expected 'var', 'subtype' or '<name> : <type>'",
                         l.number, column);
      decls.push_back({l.number, column, t});
    } else {
      decls.back().text += " " + t;
    }
  }

  Repository repo;
  std::set<std::string> var_names;
  for (const auto& d : decls) {
    if (!detail::starts_with_word(d.text, "var")) continue;
    std::string rest = trim(std::string_view(d.text).substr(3));
    std::size_t sp = rest.find_first_of(" \t");
    if (sp == std::string::npos)
      throw ParseError("expected 'var <name> in { ... }'", d.line, d.column);
    var_names.insert(rest.substr(0, sp));
  }

  for (const auto& d : decls) {
    std::string_view text = d.text;
    if (detail::starts_with_word(text, "var")) {
      std::string rest = trim(text.substr(3));
      std::size_t sp = rest.find_first_of(" \t");
      std::string name = rest.substr(0, sp);
      std::string tail = trim(std::string_view(rest).substr(sp));
      if (!detail::starts_with_word(tail, "in"))
        throw ParseError("expected 'in' after variable name", d.line, d.column);
      std::string set = trim(std::string_view(tail).substr(2));
      if (set.size() < 2 || set.front() != '{' || set.back() != '}')
        throw ParseError("expected '{ <type>, ... }'", d.line, d.column);
      std::string body = set.substr(1, set.size() - 2);
      if (repo.variable_kinds.contains(name))
        throw ParseError("variable '" + name + "' declared twice", d.line,
                         d.column);
      auto& kind = repo.variable_kinds[name];
      // Split on top-level commas.
      int depth = 0;
      std::size_t begin = 0;
      for (std::size_t i = 0; i <= body.size(); ++i) {
        if (i == body.size() || (body[i] == ',' && depth == 0)) {
          std::string member = trim(std::string_view(body).substr(begin, i - begin));
          if (!member.empty()) kind.push_back(parse_type(member, {}, d.line, 0));
          begin = i + 1;
        } else if (body[i] == '(') {
          ++depth;
        } else if (body[i] == ')') {
          --depth;
        }
      }
    } else if (detail::starts_with_word(text, "subtype")) {
      std::string rest = trim(text.substr(7));
      std::size_t op = rest.find("<:");
      if (op == std::string::npos)
        throw ParseError("expected 'subtype <atom> <: <atom>'", d.line, d.column);
      std::string sub = trim(std::string_view(rest).substr(0, op));
      std::string super = trim(std::string_view(rest).substr(op + 2));
      if (sub.empty() || super.empty())
        throw ParseError("expected 'subtype <atom> <: <atom>'", d.line, d.column);
      repo.taxonomy.add(sub, super);
    } else {
      std::size_t colon = *detail::declaration_colon(text);
      std::string name = trim(text.substr(0, colon));
      std::string type_text(text.substr(colon + 1));
      repo.combinators.push_back(
          {name, parse_type(type_text, var_names, d.line, 0)});
    }
  }
  return repo;
}

/// Prints a repository in the file format; parse_repository(print(r))
/// reproduces r.
inline std::string print_repository(const Repository& repo) {
  std::ostringstream out;
  for (const auto& [name, kind] : repo.variable_kinds) {
    out << "var " << name << " in { ";
    for (std::size_t i = 0; i < kind.size(); ++i)
      out << (i ? ", " : "") << to_string(kind[i]);
    out << " }\n";
  }
  for (const auto& [sub, super] : repo.taxonomy.pairs())
    out << "subtype " << sub << " <: " << super << "\n";
  for (const auto& c : repo.combinators)
    out << c.name << " : " << to_string(c.type) << "\n";
  return out.str();
}

/// One diagnostic per invariant violation; empty iff the repository is valid.
inline std::vector<Diagnostic> validate(const Repository& repo) {
  std::vector<Diagnostic> out;
  std::set<std::string> names;
  for (const auto& c : repo.combinators)
    if (!names.insert(c.name).second)
      out.push_back({Diagnostic::Code::DuplicateName, c.name,
                     "combinator '" + c.name + "' declared more than once"});

  std::set<std::string> reported;
  for (const auto& c : repo.combinators) {
    std::set<std::string> vars;
    collect_variables(c.type, vars);
    for (const auto& v : vars)
      if (!repo.variable_kinds.contains(v) && reported.insert(v).second)
        out.push_back({Diagnostic::Code::UnboundVariableKind, v,
                       "type variable '" + v + "' (in '" + c.name +
                           "') has no kind declaration"});
  }

  for (const auto& [name, kind] : repo.variable_kinds) {
    if (kind.empty())
      out.push_back({Diagnostic::Code::EmptyKind, name,
                     "kind of '" + name + "' is empty"});
    for (const auto& member : kind)
      if (!is_closed(member))
        out.push_back({Diagnostic::Code::OpenKindMember, name,
                       "kind of '" + name + "' contains open type '" +
                           to_string(member) + "'"});
  }

  std::map<std::string, std::size_t> arities;
  std::set<std::string> clashes;
  auto check = [&](const Type& t) {
    if (auto clash = collect_constructor_arities(t, arities))
      if (clashes.insert(*clash).second)
        out.push_back({Diagnostic::Code::ConstructorArity, *clash,
                       "constructor '" + *clash +
                           "' used with more than one arity"});
  };
  for (const auto& c : repo.combinators) check(c.type);
  for (const auto& [name, kind] : repo.variable_kinds)
    for (const auto& member : kind) check(member);
  return out;
}

/// Cartesian product of the kinds of the variables occurring in the
/// combinator's type; {{}} for a variable-free type.
inline std::vector<Substitution> substitutions(const Repository& repo,
                                               std::string_view combinator) {
  const Combinator* c = repo.find(combinator);
  if (!c)
    throw ValidationError("unknown combinator '" + std::string(combinator) + "'");
  std::set<std::string> vars;
  collect_variables(c->type, vars);
  std::vector<Substitution> out{Substitution{}};
  for (const auto& v : vars) {
    auto it = repo.variable_kinds.find(v);
    if (it == repo.variable_kinds.end())
      throw ValidationError("type variable '" + v + "' has no kind declaration");
    std::vector<Substitution> next;
    for (const auto& partial : out)
      for (const auto& choice : it->second) {
        Substitution s = partial;
        s.emplace(v, choice);
        next.push_back(std::move(s));
      }
    out = std::move(next);
  }
  return out;
}

/// The combinator's type with every admissible substitution applied and the
/// instances intersected.  This is the type the typing rules assign to the
/// bare combinator.
inline Type instantiated_type(const Repository& repo,
                              std::string_view combinator) {
  std::vector<Type> instances;
  const Combinator* c = repo.find(combinator);
  for (const auto& s : substitutions(repo, combinator))
    instances.push_back(apply_substitution(s, c->type));
  return canonical(intersect_all(instances));
}

}  // namespace clssmt
