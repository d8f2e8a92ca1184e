#include "openteam/envs/lbf.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "moves.hpp"

namespace openteam::envs {

const LbfAgent& LbfState::agent(AgentId id) const {
  for (const auto& a : agents)
    if (a.id == id) return a;
  throw std::invalid_argument("lbf: no agent " + std::to_string(id));
}

bool LbfState::occupied(Cell c) const {
  for (const auto& a : agents)
    if (a.pos == c) return true;
  for (const auto& o : objects)
    if (!o.collected && o.pos == c) return true;
  return false;
}

int LbfState::uncollected() const {
  return int(std::count_if(objects.begin(), objects.end(), [](const LbfObject& o) { return !o.collected; }));
}

LbfState lbf_reset(const LbfConfig& cfg, Rng& rng) {
  if (cfg.size < 2 || cfg.objects < 1 || cfg.max_level < 1 || cfg.horizon < 1)
    throw std::invalid_argument("lbf: invalid config");
  LbfState s;
  s.cfg = cfg;
  std::uniform_int_distribution<int> level(1, cfg.max_level);
  for (int i = 0; i < cfg.objects; ++i) {
    const Cell c = detail::random_free_cell(cfg.size, rng, [&](Cell x) { return s.occupied(x); });
    s.objects.push_back({c, level(rng), false});
  }
  lbf_add_agent(s, osbg::kLearnerId, rng);
  return s;
}

void lbf_add_agent(LbfState& s, AgentId id, Rng& rng) {
  for (const auto& a : s.agents)
    if (a.id == id) throw std::invalid_argument("lbf: agent " + std::to_string(id) + " already present");
  const Cell c = detail::random_free_cell(s.cfg.size, rng, [&](Cell x) { return s.occupied(x); });
  const int level = std::uniform_int_distribution<int>(1, s.cfg.max_level)(rng);
  auto it = std::lower_bound(s.agents.begin(), s.agents.end(), id,
                             [](const LbfAgent& a, AgentId key) { return a.id < key; });
  s.agents.insert(it, LbfAgent{id, c, level});
}

void lbf_remove_agent(LbfState& s, AgentId id) {
  if (id == osbg::kLearnerId) throw std::invalid_argument("lbf: the learner cannot leave");
  std::erase_if(s.agents, [id](const LbfAgent& a) { return a.id == id; });
}

StepResult lbf_step(LbfState& s, const osbg::JointAgentAction& a) {
  if (a.size() != s.agents.size()) throw std::invalid_argument("lbf: joint action does not match present agents");
  std::vector<Cell> from;
  std::vector<int> moves;
  for (const auto& ag : s.agents) {
    const int act = a.at(ag.id);
    if (act < 0 || act >= kLbfActions) throw std::invalid_argument("lbf: action out of range");
    from.push_back(ag.pos);
    moves.push_back(act);
  }
  const auto to = detail::resolve_moves(from, moves, s.cfg.size, [&](Cell c) { return s.occupied(c); });
  for (std::size_t i = 0; i < s.agents.size(); ++i) s.agents[i].pos = to[i];

  StepResult res;
  for (auto& obj : s.objects) {
    if (obj.collected) continue;
    int total = 0;
    bool learner_loads = false;
    for (std::size_t i = 0; i < s.agents.size(); ++i) {
      if (moves[i] != kLoad || !adjacent4(s.agents[i].pos, obj.pos)) continue;
      total += s.agents[i].level;
      learner_loads = learner_loads || s.agents[i].id == osbg::kLearnerId;
    }
    if (total > 0 && total >= obj.level) {
      obj.collected = true;
      if (learner_loads) res.reward += obj.level;
    }
  }
  s.step += 1;
  res.done = s.uncollected() == 0 || s.step >= s.cfg.horizon;
  return res;
}

}  // namespace openteam::envs
