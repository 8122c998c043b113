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

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "clssmt/error.hpp"

namespace clssmt {

/// Bijection between names and the integers 1..n.  Used for combinators
/// (labels of `inhabitant`, where 0 marks application nodes) and, separately,
/// for nonterminals (values of `ty`).
class IndexTable {
 public:
  IndexTable() = default;

  /// Builds from names listed in index order: names[k] gets k+1.
  explicit IndexTable(const std::vector<std::string>& names) {
    for (const auto& n : names) add(n);
  }

  int add(const std::string& name) {
    auto [it, fresh] = to_index_.emplace(name, static_cast<int>(names_.size()) + 1);
    if (!fresh) throw ValidationError("duplicate table entry '" + name + "'");
    names_.push_back(name);
    return it->second;
  }

  bool contains(std::string_view name) const {
    return to_index_.find(std::string(name)) != to_index_.end();
  }

  int index(std::string_view name) const {
    auto it = to_index_.find(std::string(name));
    if (it == to_index_.end())
      throw ValidationError("unknown name '" + std::string(name) + "'");
    return it->second;
  }

  bool has_index(std::int64_t k) const {
    return k >= 1 && k <= static_cast<std::int64_t>(names_.size());
  }

  const std::string& name(std::int64_t k) const {
    if (!has_index(k))
      throw ValidationError("index " + std::to_string(k) + " out of range");
    return names_[static_cast<std::size_t>(k - 1)];
  }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  friend bool operator==(const IndexTable& a, const IndexTable& b) {
    return a.names_ == b.names_;
  }

 private:
  std::map<std::string, int> to_index_;
  std::vector<std::string> names_;
};

using CombinatorTable = IndexTable;
using NonterminalTable = IndexTable;

}  // namespace clssmt
