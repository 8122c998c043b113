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

// Bottom-up typing oracle.  A combinator's principal type is the
// intersection of its substitution instances; an application M N has the
// principal type ⋂{ β | α → β a component of type(M), type(N) <= α }, and is
// untypable when that set is empty.  M : τ iff type(M) <= τ.
//
// Independent of the grammar construction: no paths, covers or nonterminals.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clssmt/grammar.hpp"
#include "clssmt/repository.hpp"
#include "clssmt/types.hpp"

namespace clssmt::oracle {

inline Type substitute(const Type& t, const std::map<std::string, Type>& s) {
  switch (t.kind()) {
    case Type::Kind::Variable: return s.at(t.name());
    case Type::Kind::Constant: return t;
    case Type::Kind::Constructor: {
      std::vector<Type> args;
      for (const auto& c : t.children()) args.push_back(substitute(c, s));
      return Type::constructor(t.name(), args);
    }
    case Type::Kind::Arrow:
      return Type::arrow(substitute(t.source(), s), substitute(t.target(), s));
    case Type::Kind::Intersection:
      return Type::intersection(substitute(t.left(), s), substitute(t.right(), s));
  }
  return t;
}

inline void flatten(const Type& t, std::vector<Type>& out) {
  if (t.is(Type::Kind::Intersection)) {
    flatten(t.left(), out);
    flatten(t.right(), out);
  } else {
    out.push_back(t);
  }
}

inline Type meet(const std::vector<Type>& parts) {
  Type t = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) t = Type::intersection(t, parts[i]);
  return t;
}

class TypingOracle {
 public:
  explicit TypingOracle(const Repository& repo) : repo_(repo) {
    for (const auto& c : repo.combinators) {
      std::set<std::string> vars;
      collect_variables(c.type, vars);
      std::vector<std::string> names(vars.begin(), vars.end());
      std::vector<Type> instances;
      std::map<std::string, Type> s;
      auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == names.size()) {
          instances.push_back(substitute(c.type, s));
          return;
        }
        for (const auto& member : repo.variable_kinds.at(names[i])) {
          s.insert_or_assign(names[i], member);
          self(self, i + 1);
        }
      };
      rec(rec, 0);
      principal_.emplace(c.name, meet(instances));
    }
  }

  std::optional<Type> principal(const Term& t) const {
    auto it = principal_.find(t.combinator);
    if (it == principal_.end()) return std::nullopt;
    Type cur = it->second;
    for (const auto& arg : t.args) {
      auto a = principal(arg);
      if (!a) return std::nullopt;
      std::vector<Type> parts, targets;
      flatten(cur, parts);
      for (const auto& p : parts)
        if (p.is(Type::Kind::Arrow) && is_subtype(*a, p.source(), repo_.taxonomy))
          targets.push_back(p.target());
      if (targets.empty()) return std::nullopt;
      cur = meet(targets);
    }
    return cur;
  }

  bool has_type(const Term& t, const Type& goal) const {
    auto p = principal(t);
    return p && is_subtype(*p, goal, repo_.taxonomy);
  }

  /// Every term over the repository's combinators (each at arities up to
  /// `max_args`) whose layout depth is at most `depth`.
  std::vector<Term> all_terms(std::size_t depth, std::size_t max_args) const {
    std::vector<std::vector<Term>> by_depth;  // terms of depth <= d
    for (std::size_t d = 0; d <= depth; ++d) {
      std::vector<Term> out;
      for (const auto& c : repo_.combinators) {
        for (std::size_t n = 0; n <= max_args && n <= d; ++n) {
          if (n == 0) {
            out.emplace_back(c.name);
            continue;
          }
          // Argument k (1-based) needs depth <= d - (n - k + 1).
          std::vector<std::size_t> pick(n, 0);
          std::vector<const std::vector<Term>*> pools;
          bool empty = false;
          for (std::size_t k = 1; k <= n; ++k) {
            std::size_t budget = d - (n - k + 1);
            pools.push_back(&by_depth[budget]);
            empty = empty || by_depth[budget].empty();
          }
          if (empty) continue;
          while (true) {
            Term t(c.name);
            for (std::size_t k = 0; k < n; ++k) t.args.push_back((*pools[k])[pick[k]]);
            out.push_back(std::move(t));
            std::size_t k = n;
            while (k > 0 && ++pick[k - 1] == pools[k - 1]->size()) pick[--k] = 0;
            if (k == 0) break;
          }
        }
      }
      by_depth.push_back(std::move(out));
    }
    return by_depth.back();
  }

 private:
  const Repository& repo_;
  std::map<std::string, Type> principal_;
};

}  // namespace clssmt::oracle
