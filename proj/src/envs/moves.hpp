#pragma once

#include <functional>
#include <map>
#include <vector>

#include "openteam/envs/grid.hpp"

namespace openteam::envs::detail {

// Simultaneous movement: a move off-grid or into any currently occupied cell
// becomes stay, and moves that collide on the same free cell all become stay.
inline std::vector<Cell> resolve_moves(const std::vector<Cell>& from, const std::vector<int>& moves, int size,
                                       const std::function<bool(Cell)>& occupied) {
  std::vector<Cell> to(from.size());
  std::map<Cell, int> claims;
  for (std::size_t i = 0; i < from.size(); ++i) {
    const Cell target = shifted(from[i], moves[i]);
    const bool legal = target != from[i] && in_bounds(target, size) && !occupied(target);
    to[i] = legal ? target : from[i];
    if (legal) ++claims[target];
  }
  for (std::size_t i = 0; i < from.size(); ++i)
    if (to[i] != from[i] && claims[to[i]] > 1) to[i] = from[i];
  return to;
}

template <class Occupied>
Cell random_free_cell(int size, Rng& rng, Occupied occupied) {
  std::vector<Cell> free;
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c)
      if (!occupied(Cell{r, c})) free.push_back({r, c});
  if (free.empty()) throw std::runtime_error("grid has no free cell");
  return free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
}

}  // namespace openteam::envs::detail
