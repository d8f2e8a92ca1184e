#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "openteam/teammates/policies.hpp"

namespace openteam::teammates {
namespace {

using envs::LbfAgent;
using envs::LbfState;
using envs::manhattan;

struct View {
  const LbfAgent* self = nullptr;
  std::vector<const LbfAgent*> others;  // visible agents other than self
  std::vector<std::size_t> objects;     // visible uncollected object indices
};

View observe(const LbfState& s, AgentId self, int window) {
  View v;
  v.self = &s.agent(self);
  const int reach = window / 2;
  for (const auto& a : s.agents)
    if (a.id != self && envs::chebyshev(a.pos, v.self->pos) <= reach) v.others.push_back(&a);
  for (std::size_t i = 0; i < s.objects.size(); ++i)
    if (!s.objects[i].collected && envs::chebyshev(s.objects[i].pos, v.self->pos) <= reach) v.objects.push_back(i);
  return v;
}

double centroid_distance(Cell c, double row, double col) { return std::abs(c.row - row) + std::abs(c.col - col); }

// Smallest key wins; ties go to the lower object index.
template <class Key>
std::optional<std::size_t> pick(const std::vector<std::size_t>& candidates, Key key) {
  std::optional<std::size_t> best;
  for (std::size_t i : candidates)
    if (!best || key(i) < key(*best)) best = i;
  return best;
}

std::optional<std::size_t> highest_below(const LbfState& s, const std::vector<std::size_t>& objs, Cell pos,
                                         int level) {
  std::vector<std::size_t> below;
  for (std::size_t i : objs)
    if (s.objects[i].level < level) below.push_back(i);
  const auto& pool = below.empty() ? objs : below;
  return pick(pool, [&](std::size_t i) { return std::pair(-s.objects[i].level, manhattan(pos, s.objects[i].pos)); });
}

std::optional<std::size_t> farthest(const LbfState& s, const std::vector<std::size_t>& objs, Cell pos) {
  return pick(objs, [&](std::size_t i) { return -manhattan(pos, s.objects[i].pos); });
}

std::optional<std::size_t> closest(const LbfState& s, const std::vector<std::size_t>& objs, Cell pos) {
  return pick(objs, [&](std::size_t i) { return manhattan(pos, s.objects[i].pos); });
}

std::optional<std::size_t> closest_to_centroid(const LbfState& s, const std::vector<std::size_t>& objs,
                                               const View& v) {
  double row = v.self->pos.row, col = v.self->pos.col;
  for (const auto* a : v.others) {
    row += a->pos.row;
    col += a->pos.col;
  }
  row /= double(v.others.size() + 1);
  col /= double(v.others.size() + 1);
  return pick(objs, [&](std::size_t i) { return centroid_distance(s.objects[i].pos, row, col); });
}

const LbfAgent* choose_leader(const View& v, bool by_level) {
  const LbfAgent* leader = nullptr;
  if (by_level) {
    for (const auto* a : v.others)
      if (a->level > v.self->level && (!leader || a->level > leader->level)) leader = a;
    if (leader) return leader;
  }
  int best = -1;
  for (const auto* a : v.others) {
    const int d = manhattan(a->pos, v.self->pos);
    if (d > best) {
      best = d;
      leader = a;
    }
  }
  return leader;
}

int approach(const LbfState& s, Cell pos, Cell target, bool load) {
  if (envs::adjacent4(pos, target)) return load ? envs::kLoad : envs::stay;
  if (pos == target) return envs::stay;
  const int dr = target.row - pos.row, dc = target.col - pos.col;
  const int row_move = dr < 0 ? envs::up : envs::down;
  const int col_move = dc < 0 ? envs::left : envs::right;
  auto free = [&](int m) {
    const Cell c = envs::shifted(pos, m);
    return envs::in_bounds(c, s.cfg.size) && !s.occupied(c);
  };
  if (dr != 0 && free(row_move)) return row_move;
  if (dc != 0 && free(col_move)) return col_move;
  return dr != 0 ? row_move : col_move;
}

}  // namespace

namespace detail {

std::optional<std::size_t> lbf_target(const TypeId& type, const LbfState& s, AgentId self, int window) {
  const View v = observe(s, self, window);
  const Cell pos = v.self->pos;
  switch (type.heuristic) {
    case 1:
    case 2: {
      const LbfAgent* leader = choose_leader(v, type.heuristic == 1);
      if (!leader) return std::nullopt;
      return type.heuristic == 1 ? highest_below(s, v.objects, leader->pos, leader->level)
                                 : farthest(s, v.objects, leader->pos);
    }
    case 3: return highest_below(s, v.objects, pos, v.self->level);
    case 4: return farthest(s, v.objects, pos);
    case 6: return closest(s, v.objects, pos);
    case 7: return closest_to_centroid(s, v.objects, v);
    case 8: {
      std::vector<std::size_t> ok;
      for (std::size_t i : v.objects)
        if (s.objects[i].level <= v.self->level) ok.push_back(i);
      return closest(s, ok, pos);
    }
    case 9: {
      int total = v.self->level;
      for (const auto* a : v.others) total += a->level;
      std::vector<std::size_t> ok;
      for (std::size_t i : v.objects)
        if (s.objects[i].level <= total) ok.push_back(i);
      return closest_to_centroid(s, ok, v);
    }
    default: throw std::invalid_argument("lbf_target: unsupported type " + type.str());
  }
}

}  // namespace detail

int lbf_act(const TypeId& type, const LbfState& s, AgentId self, const TeammateMemory& mem, Rng& rng) {
  if (type.env != EnvKind::lbf || !is_implemented(type.env, type.heuristic))
    throw std::invalid_argument("lbf_act: unsupported type " + type.str());
  if (mem.window < 1) throw std::invalid_argument("lbf_act: observation window must be positive");
  const Cell pos = s.agent(self).pos;
  if (auto target = detail::lbf_target(type, s, self, mem.window))
    return approach(s, pos, s.objects[*target].pos, true);
  if (type.heuristic == 1 || type.heuristic == 2) {
    // No visible object: follow the leader itself.
    const View v = observe(s, self, mem.window);
    if (const LbfAgent* leader = choose_leader(v, type.heuristic == 1)) return approach(s, pos, leader->pos, false);
  }
  return std::uniform_int_distribution<int>(0, envs::kLbfActions - 1)(rng);
}

}  // namespace openteam::teammates
