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

// Inhabitation: builds the tree grammar of all terms of a goal type.
//
// Each combinator is typed by the intersection of all its admissible
// substitution instances.  For a pending nonterminal `goal`, a combinator and
// an arity n, a set P of n-ary paths of that type yields the rule
//
//     goal ↦ c(β1, ..., βn)   with βk = ⋂ { k-th source of p | p ∈ P }
//
// whenever ⋂ { target of p | p ∈ P } <= goal.  Only inclusion-minimal P are
// used, and an alternative c(β) is dropped when another alternative c(β') of
// the same nonterminal has βk <= β'k for every k.  Both restrictions leave
// every language unchanged: larger P only shrink the βk.

#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "clssmt/error.hpp"
#include "clssmt/grammar.hpp"
#include "clssmt/repository.hpp"
#include "clssmt/types.hpp"

namespace clssmt {

struct InhabitationOptions {
  /// Paths of one combinator at one arity beyond which exhaustive subset
  /// search is refused (only reached for goals with arrow components that no
  /// single path covers).
  std::size_t max_paths = 16;
  /// Nonterminals beyond which the construction is aborted.
  std::size_t max_nonterminals = 10'000;
};

struct CombinatorArity {
  std::string name;
  std::size_t max_arity;
};

inline std::vector<CombinatorArity> combinator_arities(const Repository& repo) {
  std::vector<CombinatorArity> out;
  for (const auto& c : repo.combinators)
    out.push_back({c.name, max_arity(instantiated_type(repo, c.name))});
  return out;
}

namespace detail {

struct PreparedCombinator {
  std::string name;
  // paths_by_arity[n] = n-ary paths of the instantiated type
  std::vector<std::vector<MultiArrow>> paths_by_arity;
};

// Inclusion-minimal index sets Q over `paths` with ⋂targets(Q) <= goal.
inline std::vector<std::vector<std::size_t>> minimal_covers(
    const std::vector<MultiArrow>& paths, const Type& goal, const Taxonomy& tax,
    const InhabitationOptions& opts, const std::string& combinator) {
  std::vector<Type> goal_parts = components(goal);
  // Which paths cover each goal component on their own.
  std::vector<std::vector<std::size_t>> single(goal_parts.size());
  bool all_single = true;
  for (std::size_t j = 0; j < goal_parts.size(); ++j) {
    for (std::size_t p = 0; p < paths.size(); ++p)
      if (is_subtype(paths[p].target, goal_parts[j], tax)) single[j].push_back(p);
    if (single[j].empty()) {
      // Atoms and constructors are only ever covered by one component, so an
      // uncovered one can never be covered.
      if (!goal_parts[j].is(Type::Kind::Arrow)) return {};
      all_single = false;
    }
  }

  std::vector<std::vector<std::size_t>> found;
  if (all_single) {
    // Minimal hitting sets: pick one covering path per component.
    std::set<std::vector<std::size_t>> sets;
    std::vector<std::size_t> chosen;
    auto rec = [&](auto&& self, std::size_t j) -> void {
      if (j == goal_parts.size()) {
        std::vector<std::size_t> s = chosen;
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        sets.insert(std::move(s));
        return;
      }
      for (std::size_t p : single[j]) {
        chosen.push_back(p);
        self(self, j + 1);
        chosen.pop_back();
      }
    };
    rec(rec, 0);
    found.assign(sets.begin(), sets.end());
  } else {
    if (paths.size() > opts.max_paths)
      throw CapacityError("combinator '" + combinator + "' has " +
                          std::to_string(paths.size()) +
                          " paths at one arity; subset search is capped at " +
                          std::to_string(opts.max_paths));
    // Subsets by increasing size so minimality can be checked against
    // earlier hits.
    std::size_t n = paths.size();
    std::vector<std::uint32_t> masks;
    for (std::uint32_t m = 1; m < (std::uint32_t{1} << n); ++m) masks.push_back(m);
    std::stable_sort(masks.begin(), masks.end(), [](auto a, auto b) {
      return __builtin_popcount(a) < __builtin_popcount(b);
    });
    std::vector<std::uint32_t> hits;
    for (std::uint32_t m : masks) {
      bool superset = std::any_of(hits.begin(), hits.end(),
                                  [m](auto h) { return (m & h) == h; });
      if (superset) continue;
      std::vector<Type> targets;
      for (std::size_t p = 0; p < n; ++p)
        if (m & (std::uint32_t{1} << p)) targets.push_back(paths[p].target);
      if (is_subtype(intersect_all(targets), goal, tax)) hits.push_back(m);
    }
    for (auto h : hits) {
      std::vector<std::size_t> s;
      for (std::size_t p = 0; p < n; ++p)
        if (h & (std::uint32_t{1} << p)) s.push_back(p);
      found.push_back(std::move(s));
    }
  }

  // Drop non-minimal sets (hitting-set products can produce supersets).
  std::vector<std::vector<std::size_t>> out;
  for (const auto& s : found) {
    bool dominated = std::any_of(found.begin(), found.end(), [&](const auto& o) {
      return o.size() < s.size() &&
             std::includes(s.begin(), s.end(), o.begin(), o.end());
    });
    if (!dominated) out.push_back(s);
  }
  return out;
}

}  // namespace detail

/// Removes rules that mention unproductive nonterminals, then nonterminals
/// unreachable from the start symbol.  The language at the start symbol is
/// unchanged; an empty language yields a grammar without rules.
inline TreeGrammar prune(const TreeGrammar& g) {
  std::set<std::string> productive;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [nt, alts] : g.rules) {
      if (productive.contains(nt)) continue;
      for (const auto& a : alts) {
        if (std::all_of(a.args.begin(), a.args.end(),
                        [&](const auto& x) { return productive.contains(x); })) {
          productive.insert(nt);
          changed = true;
          break;
        }
      }
    }
  }

  TreeGrammar out;
  out.start = g.start;
  if (!productive.contains(g.start)) return out;

  std::set<std::string> reachable{g.start};
  std::deque<std::string> queue{g.start};
  while (!queue.empty()) {
    std::string nt = queue.front();
    queue.pop_front();
    auto& dst = out.rules[nt];
    for (const auto& a : g.rules.at(nt)) {
      bool ok = std::all_of(a.args.begin(), a.args.end(),
                            [&](const auto& x) { return productive.contains(x); });
      if (!ok) continue;
      dst.insert(a);
      for (const auto& x : a.args)
        if (reachable.insert(x).second) queue.push_back(x);
    }
  }
  for (const auto& [nt, text] : g.display)
    if (out.rules.contains(nt)) out.display[nt] = text;
  return out;
}

/// The grammar before pruning: every nonterminal discovered from the goal,
/// with possibly empty alternative sets.
inline TreeGrammar inhabit_unpruned(const Repository& repo, const Type& goal,
                                    const InhabitationOptions& opts = {}) {
  if (!is_closed(goal))
    throw ValidationError("goal type '" + to_string(goal) + "' is not closed");
  if (auto diags = validate(repo); !diags.empty())
    throw ValidationError("invalid repository: " + diags.front().message);

  std::vector<detail::PreparedCombinator> prepared;
  for (const auto& c : repo.combinators) {
    Type inst = instantiated_type(repo, c.name);
    detail::PreparedCombinator pc{c.name, {}};
    std::size_t arity = max_arity(inst);
    for (std::size_t n = 0; n <= arity; ++n) pc.paths_by_arity.push_back(paths(inst, n));
    prepared.push_back(std::move(pc));
  }

  TreeGrammar g;
  Type start = canonical(goal);
  g.start = to_string(start);
  g.display[g.start] = to_string(goal);

  std::map<std::string, Type> pending_types{{g.start, start}};
  std::deque<std::string> queue{g.start};
  g.rules[g.start];

  while (!queue.empty()) {
    std::string nt = queue.front();
    queue.pop_front();
    const Type target = pending_types.at(nt);

    std::vector<std::pair<Alternative, std::vector<Type>>> candidates;
    for (const auto& pc : prepared) {
      for (std::size_t n = 0; n < pc.paths_by_arity.size(); ++n) {
        const auto& ps = pc.paths_by_arity[n];
        if (ps.empty()) continue;
        for (const auto& cover :
             detail::minimal_covers(ps, target, repo.taxonomy, opts, pc.name)) {
          Alternative alt{pc.name, {}};
          std::vector<Type> arg_types;
          for (std::size_t k = 0; k < n; ++k) {
            std::vector<Type> srcs;
            for (std::size_t p : cover) srcs.push_back(ps[p].sources[k]);
            Type arg = canonical(intersect_all(srcs));
            alt.args.push_back(to_string(arg));
            arg_types.push_back(arg);
          }
          candidates.emplace_back(std::move(alt), std::move(arg_types));
        }
      }
    }

    // Keep an alternative unless another one with the same combinator and
    // arity accepts pointwise-larger arguments (ties go to the smaller text).
    auto pointwise_leq = [&](const std::vector<Type>& a, const std::vector<Type>& b) {
      for (std::size_t k = 0; k < a.size(); ++k)
        if (!is_subtype(a[k], b[k], repo.taxonomy)) return false;
      return true;
    };
    auto& rules = g.rules[nt];
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const auto& [alt, types] = candidates[i];
      bool dominated = false;
      for (std::size_t j = 0; j < candidates.size() && !dominated; ++j) {
        const auto& [other, other_types] = candidates[j];
        if (i == j || other.combinator != alt.combinator ||
            other.args.size() != alt.args.size() || other.args == alt.args)
          continue;
        if (!pointwise_leq(types, other_types)) continue;
        dominated = !pointwise_leq(other_types, types) || other.args < alt.args;
      }
      if (dominated) continue;
      rules.insert(alt);
      for (std::size_t k = 0; k < types.size(); ++k) {
        const std::string& id = alt.args[k];
        if (pending_types.emplace(id, types[k]).second) {
          if (pending_types.size() > opts.max_nonterminals)
            throw CapacityError("inhabitation exceeded " +
                                std::to_string(opts.max_nonterminals) +
                                " nonterminals");
          g.rules[id];
          g.display[id] = id;
          queue.push_back(id);
        }
      }
    }
  }
  return g;
}

/// Γ ⊢ ? : goal.  The pruned grammar of all inhabitants.
inline TreeGrammar inhabit(const Repository& repo, const Type& goal,
                           const InhabitationOptions& opts = {}) {
  return prune(inhabit_unpruned(repo, goal, opts));
}

}  // namespace clssmt
