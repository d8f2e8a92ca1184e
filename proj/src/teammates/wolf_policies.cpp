#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "openteam/teammates/policies.hpp"

namespace openteam::teammates {
namespace {

using envs::in_bounds;
using envs::manhattan;

int uniform_action(int n, Rng& rng) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

int axis_move(int axis, Cell from, Cell to) {
  if (axis == 0) return to.row < from.row ? envs::up : envs::down;
  return to.col < from.col ? envs::left : envs::right;
}

bool free_for(const envs::WolfState& s, Cell c) { return in_bounds(c, s.cfg.size) && !s.occupied(c); }

// Move along `first` if it has distance left and the next cell is free, else
// along the other axis under the same condition, else stay.
int step_along(const envs::WolfState& s, Cell pos, Cell dest, int first) {
  const int dist[2] = {std::abs(dest.row - pos.row), std::abs(dest.col - pos.col)};
  for (int axis : {first, 1 - first}) {
    if (dist[axis] == 0) continue;
    const int m = axis_move(axis, pos, dest);
    if (free_for(s, envs::shifted(pos, m))) return m;
  }
  return envs::stay;
}

int greedy(const envs::WolfState& s, AgentId self, bool probabilistic, Rng& rng) {
  const Cell pos = s.hunter(self).pos;
  const auto prey = detail::nearest_prey(s, pos);
  if (!prey) return envs::stay;
  const Cell dest = detail::greedy_destination(s, self, *prey);
  if (dest == pos) return envs::stay;
  const int dr = std::abs(dest.row - pos.row), dc = std::abs(dest.col - pos.col);
  int first = dr >= dc ? 0 : 1;
  if (probabilistic && dr > 0 && dc > 0) {
    // Boltzmann over the axis distances at temperature 1.
    const double p_row = 1.0 / (1.0 + std::exp(double(dc - dr)));
    first = std::bernoulli_distribution(p_row)(rng) ? 0 : 1;
  }
  return step_along(s, pos, dest, first);
}

bool should_wait(const envs::WolfState& s, AgentId self, int radius) {
  const Cell pos = s.hunter(self).pos;
  const auto prey = detail::nearest_prey(s, pos);
  if (!prey) return false;
  const Cell p = s.prey[*prey];
  if (manhattan(pos, p) > radius) return false;
  for (const auto& h : s.hunters)
    if (h.id != self && manhattan(h.pos, p) <= radius) return false;
  return true;
}

}  // namespace

namespace detail {

std::optional<std::size_t> nearest_prey(const envs::WolfState& s, Cell from) {
  std::optional<std::size_t> best;
  int best_d = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < s.prey.size(); ++i) {
    const int d = manhattan(from, s.prey[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

Cell greedy_destination(const envs::WolfState& s, AgentId self, std::size_t prey) {
  const Cell pos = s.hunter(self).pos;
  const Cell p = s.prey[prey];
  std::optional<Cell> best;
  int best_d = std::numeric_limits<int>::max();
  for (Cell c : envs::neighbors4(p)) {
    if (!in_bounds(c, s.cfg.size)) continue;
    if (c != pos && s.occupied(c)) continue;
    const int d = manhattan(pos, c);
    if (d < best_d || (d == best_d && c < *best)) {
      best_d = d;
      best = c;
    }
  }
  return best.value_or(p);
}

int team_aware_move(const envs::WolfState& s, AgentId self) {
  struct Plan {
    int dist;
    AgentId id;
    Cell pos;
    std::size_t prey;
  };
  std::vector<Plan> order;
  for (const auto& h : s.hunters) {
    const auto prey = nearest_prey(s, h.pos);
    if (!prey) return envs::stay;
    order.push_back({manhattan(h.pos, s.prey[*prey]), h.id, h.pos, *prey});
  }
  std::sort(order.begin(), order.end(),
            [](const Plan& a, const Plan& b) { return a.dist != b.dist ? a.dist < b.dist : a.id < b.id; });

  std::set<Cell> claimed_dest, reserved_next;
  for (const Plan& pl : order) {
    std::optional<Cell> dest;
    int best_d = std::numeric_limits<int>::max();
    for (Cell c : envs::neighbors4(s.prey[pl.prey])) {
      if (!in_bounds(c, s.cfg.size) || s.prey_at(c) || claimed_dest.count(c)) continue;
      const int d = manhattan(pl.pos, c);
      if (d < best_d || (d == best_d && c < *dest)) {
        best_d = d;
        dest = c;
      }
    }
    int move = envs::stay;
    if (dest) {
      claimed_dest.insert(*dest);
      auto blocked = [&](Cell c) {
        if (!in_bounds(c, s.cfg.size) || s.prey_at(c) || reserved_next.count(c)) return true;
        return c != pl.pos && s.hunter_at(c);
      };
      // Breadth-first search from the destination back to the hunter; the
      // first step is the neighbor with the smallest distance.
      std::map<Cell, int> dist;
      std::deque<Cell> queue;
      if (!blocked(*dest) || *dest == pl.pos) {
        dist[*dest] = 0;
        queue.push_back(*dest);
      }
      while (!queue.empty() && !dist.count(pl.pos)) {
        const Cell c = queue.front();
        queue.pop_front();
        for (int m = 0; m < envs::stay; ++m) {
          const Cell n = envs::shifted(c, m);
          if (dist.count(n) || (blocked(n) && n != pl.pos)) continue;
          dist[n] = dist[c] + 1;
          queue.push_back(n);
        }
      }
      if (dist.count(pl.pos) && dist[pl.pos] > 0) {
        for (int m = 0; m < envs::stay; ++m) {
          auto it = dist.find(envs::shifted(pl.pos, m));
          if (it != dist.end() && it->second == dist[pl.pos] - 1) {
            move = m;
            break;
          }
        }
      }
    }
    if (pl.id == self) return move;
    reserved_next.insert(envs::shifted(pl.pos, move));
  }
  throw std::invalid_argument("team_aware_move: hunter not present");
}

}  // namespace detail

int wolf_act(const TypeId& type, const envs::WolfState& s, AgentId self, const TeammateMemory& mem, Rng& rng) {
  if (type.env != EnvKind::wolfpack || !is_implemented(type.env, type.heuristic))
    throw std::invalid_argument("wolf_act: unsupported type " + type.str());
  switch (type.heuristic) {
    case 1: return uniform_action(envs::kWolfActions, rng);
    case 2: return greedy(s, self, false, rng);
    case 3: return greedy(s, self, true, rng);
    case 4: return detail::team_aware_move(s, self);
    default: break;
  }
  if (should_wait(s, self, mem.waiting_radius)) return uniform_action(envs::kWolfActions, rng);
  switch (type.heuristic) {
    case 7: return greedy(s, self, false, rng);
    case 8: return greedy(s, self, true, rng);
    default: return detail::team_aware_move(s, self);
  }
}

}  // namespace openteam::teammates
