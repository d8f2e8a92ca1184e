#pragma once

#include <vector>

#include "openteam/envs/lbf.hpp"
#include "openteam/envs/wolfpack.hpp"

namespace openteam::envs {

inline constexpr double kSentinel = -1.0;

// Shared vector u plus one feature row x per present agent. Rows follow the
// state's agent order: learner first, then ascending id.
struct Observation {
  std::vector<double> u;
  std::vector<AgentId> ids;
  std::vector<std::vector<double>> x;

  std::size_t agent_dim() const { return x.empty() ? 0 : x.front().size(); }
};

// u: objects x (row, col, level); x: (row, col, level).
Observation encode_obs(const LbfState& s);
// u: prey x (row, col); x: (row, col).
Observation encode_obs(const WolfState& s);

}  // namespace openteam::envs
