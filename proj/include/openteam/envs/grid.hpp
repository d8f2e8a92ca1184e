#pragma once

#include <array>
#include <cstdlib>
#include <random>

namespace openteam::envs {

using Rng = std::mt19937_64;

struct Cell {
  int row = 0;
  int col = 0;
  bool operator==(const Cell&) const = default;
  auto operator<=>(const Cell&) const = default;
};

// Shared action indices: the first five are common to both environments.
enum Move : int { up = 0, down = 1, left = 2, right = 3, stay = 4 };
inline constexpr int kLoad = 5;

inline constexpr std::array<Cell, 5> kMoveDelta = {Cell{-1, 0}, Cell{1, 0}, Cell{0, -1}, Cell{0, 1}, Cell{0, 0}};

inline Cell shifted(Cell c, int move) {
  if (move < 0 || move > stay) return c;
  return {c.row + kMoveDelta[move].row, c.col + kMoveDelta[move].col};
}

inline bool in_bounds(Cell c, int size) { return c.row >= 0 && c.col >= 0 && c.row < size && c.col < size; }

inline int manhattan(Cell a, Cell b) { return std::abs(a.row - b.row) + std::abs(a.col - b.col); }

inline int chebyshev(Cell a, Cell b) { return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col)); }

inline bool adjacent4(Cell a, Cell b) { return manhattan(a, b) == 1; }

inline std::array<Cell, 4> neighbors4(Cell c) {
  return {Cell{c.row - 1, c.col}, Cell{c.row + 1, c.col}, Cell{c.row, c.col - 1}, Cell{c.row, c.col + 1}};
}

}  // namespace openteam::envs
