#pragma once

#include <vector>

#include "openteam/envs/grid.hpp"
#include "openteam/envs/lbf.hpp"
#include "openteam/osbg/roster.hpp"

namespace openteam::envs {

struct WolfConfig {
  int size = 10;
  int prey = 2;
  int horizon = 200;
  double capture_reward_per_hunter = 2.0;
  double lone_penalty = -0.5;
};

inline constexpr int kWolfActions = 5;  // up, down, left, right, stay

struct Hunter {
  AgentId id = 0;
  Cell pos;
};

struct WolfState {
  WolfConfig cfg;
  std::vector<Hunter> hunters;  // learner first, then ascending id
  std::vector<Cell> prey;
  int step = 0;

  const Hunter& hunter(AgentId id) const;
  bool hunter_at(Cell c) const;
  bool prey_at(Cell c) const;
  bool occupied(Cell c) const { return hunter_at(c) || prey_at(c); }
};

WolfState wolf_reset(const WolfConfig& cfg, Rng& rng);
void wolf_add_agent(WolfState& s, AgentId id, Rng& rng);
void wolf_remove_agent(WolfState& s, AgentId id);

// Hunters move, captures are resolved and rewarded, captured prey respawn,
// then surviving prey flee.
StepResult wolf_step(WolfState& s, const osbg::JointAgentAction& a, Rng& rng);

// Move maximizing the minimum Chebyshev distance to any hunter over legal
// moves, ties broken uniformly.
int prey_act(const WolfState& s, std::size_t prey_index, Rng& rng);

}  // namespace openteam::envs
