#pragma once

#include <cstdint>
#include <map>
#include <variant>

#include "openteam/envs/lbf.hpp"
#include "openteam/envs/observation.hpp"
#include "openteam/envs/wolfpack.hpp"
#include "openteam/osbg/roster.hpp"
#include "openteam/teammates/policies.hpp"

namespace openteam::world {

using osbg::AgentId;
using teammates::EnvKind;

struct GameConfig {
  EnvKind env = EnvKind::wolfpack;
  envs::LbfConfig lbf;
  envs::WolfConfig wolf;
  osbg::OpennessConfig openness;

  void validate() const;
};

struct StepOutcome {
  double reward = 0.0;
  bool done = false;
  osbg::RosterEvents events;  // empty on the terminal step
};

// One environment instance with its openness process and scripted teammates.
// Randomness is split into independent streams for the environment, the
// openness process and the teammate policies.
class OpenGame {
 public:
  OpenGame(GameConfig cfg, std::uint64_t seed);

  // Starts a new episode; the events list the initial teammates as arrivals.
  osbg::RosterEvents reset();

  envs::Observation observe() const;
  int num_actions() const;
  // Actions of every present teammate.
  osbg::JointAgentAction teammate_actions();
  // Completes `teammate_actions()` with the learner's action and steps.
  StepOutcome step(int learner_action);
  // Steps with an explicit joint action covering the whole roster.
  StepOutcome step(const osbg::JointAgentAction& joint);

  const GameConfig& config() const { return cfg_; }
  const osbg::Roster& roster() const { return roster_; }
  const teammates::TypeId& type_of(AgentId id) const { return team_.at(id).type; }
  const teammates::TeammateMemory& memory_of(AgentId id) const { return team_.at(id).memory; }
  int episode_step() const { return step_; }
  const envs::LbfState* lbf() const { return std::get_if<envs::LbfState>(&state_); }
  const envs::WolfState* wolf() const { return std::get_if<envs::WolfState>(&state_); }

 private:
  struct Teammate {
    teammates::TypeId type;
    teammates::TeammateMemory memory;
  };

  void admit(const osbg::Arrival& a);
  void depart(AgentId id);

  GameConfig cfg_;
  envs::Rng env_rng_;
  envs::Rng open_rng_;
  envs::Rng team_rng_;
  osbg::Roster roster_;
  std::map<AgentId, Teammate> team_;
  std::variant<envs::LbfState, envs::WolfState> state_;
  int step_ = 0;
};

}  // namespace openteam::world
