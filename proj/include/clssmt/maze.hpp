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

// Grid labyrinths as repositories: free cells become Pos(x,y) constructor
// types, and each movement combinator is the intersection of its legal moves.
// x is the column, y the row, and `up` decreases y.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "clssmt/error.hpp"
#include "clssmt/repository.hpp"
#include "clssmt/types.hpp"

namespace clssmt {

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
};

struct Maze {
  int width = 0;
  int height = 0;
  std::vector<bool> blocked;  // row-major
  Cell start;
  Cell goal;

  bool free(int x, int y) const {
    return x >= 0 && y >= 0 && x < width && y < height &&
           !blocked[static_cast<std::size_t>(y * width + x)];
  }

  std::string render() const {
    std::string out;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        Cell c{x, y};
        out += c == start ? 'S' : c == goal ? 'G' : free(x, y) ? '.' : '#';
      }
      out += '\n';
    }
    return out;
  }
};

inline Type position_type(int x, int y) {
  return Type::constructor(
      "Pos", {Type::constant(std::to_string(x)), Type::constant(std::to_string(y))});
}

inline Type position_type(Cell c) { return position_type(c.x, c.y); }

/// The 3x4 labyrinth with start (0,2) and goal (1,0).
inline Maze example_maze() {
  Maze m{3, 4, std::vector<bool>(12, false), {0, 2}, {1, 0}};
  for (auto [x, y] : {std::pair{0, 0}, {2, 0}, {1, 2}})
    m.blocked[static_cast<std::size_t>(y * 3 + x)] = true;
  return m;
}

/// An n x n maze; each cell is blocked with probability `density`, except the
/// start (bottom-left) and goal (top-right).  The pattern depends only on
/// `seed`: blocking compares raw 32-bit mt19937 draws against a threshold,
/// which unlike std::bernoulli_distribution is identical across libraries.
inline Maze random_maze(int n, std::uint32_t seed, double density = 0.2) {
  if (n < 2) throw ValidationError("maze size must be at least 2");
  if (density < 0 || density > 1) throw ValidationError("obstacle density must be in [0, 1]");
  Maze m{n, n, std::vector<bool>(static_cast<std::size_t>(n) * n, false), {0, n - 1},
         {n - 1, 0}};
  std::mt19937 rng(seed);
  const double threshold = density * 4294967296.0;
  for (auto&& b : m.blocked) b = static_cast<double>(rng()) < threshold;
  m.blocked[static_cast<std::size_t>(m.start.y * n + m.start.x)] = false;
  m.blocked[static_cast<std::size_t>(m.goal.y * n + m.goal.x)] = false;
  return m;
}

/// left, right, up, down (those with at least one legal move), then start.
inline Repository maze_repository(const Maze& m) {
  struct Move {
    const char* name;
    int dx, dy;  // from (x+dx, y+dy) to (x, y)
  };
  static constexpr Move kMoves[] = {
      {"left", 1, 0}, {"right", -1, 0}, {"up", 0, 1}, {"down", 0, -1}};
  Repository repo;
  for (const auto& mv : kMoves) {
    std::vector<Type> arrows;
    for (int y = 0; y < m.height; ++y)
      for (int x = 0; x < m.width; ++x)
        if (m.free(x, y) && m.free(x + mv.dx, y + mv.dy))
          arrows.push_back(Type::arrow(position_type(x + mv.dx, y + mv.dy),
                                       position_type(x, y)));
    if (!arrows.empty()) repo.combinators.push_back({mv.name, intersect_all(arrows)});
  }
  repo.combinators.push_back({"start", position_type(m.start)});
  return repo;
}

}  // namespace clssmt
