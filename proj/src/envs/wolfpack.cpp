#include "openteam/envs/wolfpack.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "moves.hpp"

namespace openteam::envs {

const Hunter& WolfState::hunter(AgentId id) const {
  for (const auto& h : hunters)
    if (h.id == id) return h;
  throw std::invalid_argument("wolfpack: no hunter " + std::to_string(id));
}

bool WolfState::hunter_at(Cell c) const {
  return std::any_of(hunters.begin(), hunters.end(), [c](const Hunter& h) { return h.pos == c; });
}

bool WolfState::prey_at(Cell c) const { return std::find(prey.begin(), prey.end(), c) != prey.end(); }

WolfState wolf_reset(const WolfConfig& cfg, Rng& rng) {
  if (cfg.size < 2 || cfg.prey < 1 || cfg.horizon < 1) throw std::invalid_argument("wolfpack: invalid config");
  WolfState s;
  s.cfg = cfg;
  for (int i = 0; i < cfg.prey; ++i)
    s.prey.push_back(detail::random_free_cell(cfg.size, rng, [&](Cell c) { return s.occupied(c); }));
  wolf_add_agent(s, osbg::kLearnerId, rng);
  return s;
}

void wolf_add_agent(WolfState& s, AgentId id, Rng& rng) {
  for (const auto& h : s.hunters)
    if (h.id == id) throw std::invalid_argument("wolfpack: hunter " + std::to_string(id) + " already present");
  const Cell c = detail::random_free_cell(s.cfg.size, rng, [&](Cell x) { return s.occupied(x); });
  auto it = std::lower_bound(s.hunters.begin(), s.hunters.end(), id,
                             [](const Hunter& h, AgentId key) { return h.id < key; });
  s.hunters.insert(it, Hunter{id, c});
}

void wolf_remove_agent(WolfState& s, AgentId id) {
  if (id == osbg::kLearnerId) throw std::invalid_argument("wolfpack: the learner cannot leave");
  std::erase_if(s.hunters, [id](const Hunter& h) { return h.id == id; });
}

int prey_act(const WolfState& s, std::size_t prey_index, Rng& rng) {
  const Cell p = s.prey.at(prey_index);
  int best = std::numeric_limits<int>::min();
  std::vector<int> ties;
  for (int m = 0; m < kWolfActions; ++m) {
    const Cell to = shifted(p, m);
    if (m != stay && (!in_bounds(to, s.cfg.size) || s.occupied(to))) continue;
    int d = std::numeric_limits<int>::max();
    for (const auto& h : s.hunters) d = std::min(d, chebyshev(to, h.pos));
    if (d > best) {
      best = d;
      ties.assign(1, m);
    } else if (d == best) {
      ties.push_back(m);
    }
  }
  return ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng)];
}

StepResult wolf_step(WolfState& s, const osbg::JointAgentAction& a, Rng& rng) {
  if (a.size() != s.hunters.size())
    throw std::invalid_argument("wolfpack: joint action does not match present hunters");
  std::vector<Cell> from;
  std::vector<int> moves;
  for (const auto& h : s.hunters) {
    const int act = a.at(h.id);
    if (act < 0 || act >= kWolfActions) throw std::invalid_argument("wolfpack: action out of range");
    from.push_back(h.pos);
    moves.push_back(act);
  }
  const auto to = detail::resolve_moves(from, moves, s.cfg.size, [&](Cell c) { return s.occupied(c); });
  for (std::size_t i = 0; i < s.hunters.size(); ++i) s.hunters[i].pos = to[i];

  StepResult res;
  const Cell learner = s.hunter(osbg::kLearnerId).pos;
  std::vector<bool> captured(s.prey.size(), false);
  for (std::size_t p = 0; p < s.prey.size(); ++p) {
    int pack = 0;
    for (const auto& h : s.hunters)
      if (adjacent4(h.pos, s.prey[p])) ++pack;
    const bool learner_in = adjacent4(learner, s.prey[p]);
    if (pack >= 2) {
      captured[p] = true;
      if (learner_in) res.reward += s.cfg.capture_reward_per_hunter * pack;
    } else if (learner_in) {
      res.reward += s.cfg.lone_penalty;
    }
  }
  for (std::size_t p = 0; p < s.prey.size(); ++p) {
    if (!captured[p]) continue;
    s.prey[p] = detail::random_free_cell(s.cfg.size, rng, [&](Cell c) { return s.occupied(c); });
  }
  for (std::size_t p = 0; p < s.prey.size(); ++p) {
    if (captured[p]) continue;
    s.prey[p] = shifted(s.prey[p], prey_act(s, p, rng));
  }
  s.step += 1;
  res.done = s.step >= s.cfg.horizon;
  return res;
}

}  // namespace openteam::envs
