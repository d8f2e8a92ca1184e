#pragma once

#include <vector>

#include "openteam/envs/grid.hpp"
#include "openteam/osbg/roster.hpp"

namespace openteam::envs {

using osbg::AgentId;

struct LbfConfig {
  int size = 8;
  int objects = 3;
  int max_level = 3;
  int horizon = 50;
};

inline constexpr int kLbfActions = 6;  // up, down, left, right, stay, load

struct LbfAgent {
  AgentId id = 0;
  Cell pos;
  int level = 1;
};

struct LbfObject {
  Cell pos;
  int level = 1;
  bool collected = false;
};

struct LbfState {
  LbfConfig cfg;
  std::vector<LbfAgent> agents;  // learner first, then ascending id
  std::vector<LbfObject> objects;
  int step = 0;

  const LbfAgent& agent(AgentId id) const;
  bool occupied(Cell c) const;  // by an agent or an uncollected object
  int uncollected() const;
};

struct StepResult {
  double reward = 0.0;  // learner reward
  bool done = false;
};

// Learner only; objects and learner placed on distinct random cells.
LbfState lbf_reset(const LbfConfig& cfg, Rng& rng);
// Places a new agent with a random level on a random free cell.
void lbf_add_agent(LbfState& s, AgentId id, Rng& rng);
void lbf_remove_agent(LbfState& s, AgentId id);

// Resolves movement, then loading. `a` must cover exactly the present agents.
StepResult lbf_step(LbfState& s, const osbg::JointAgentAction& a);

}  // namespace openteam::envs
