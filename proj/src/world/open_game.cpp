#include "openteam/world/open_game.hpp"

#include <stdexcept>

namespace openteam::world {

void GameConfig::validate() const {
  openness.validate();
  for (const auto& tag : openness.type_pool) {
    const auto t = teammates::TypeId::parse(tag);
    if (t.env != env) throw std::invalid_argument("type " + tag + " does not belong to this environment");
  }
}

OpenGame::OpenGame(GameConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)) {
  cfg_.validate();
  std::seed_seq seq{seed, std::uint64_t(0x6f70656e)};
  std::uint64_t seeds[3];
  seq.generate(seeds, seeds + 3);
  env_rng_.seed(seeds[0]);
  open_rng_.seed(seeds[1]);
  team_rng_.seed(seeds[2]);
  reset();
}

osbg::RosterEvents OpenGame::reset() {
  step_ = 0;
  team_.clear();
  if (cfg_.env == EnvKind::lbf) {
    state_ = envs::lbf_reset(cfg_.lbf, env_rng_);
  } else {
    state_ = envs::wolf_reset(cfg_.wolf, env_rng_);
  }
  osbg::RosterEvents events;
  roster_ = osbg::reset_roster(open_rng_, cfg_.openness, &events);
  for (const auto& a : events.arrivals) admit(a);
  return events;
}

void OpenGame::admit(const osbg::Arrival& a) {
  const auto type = teammates::TypeId::parse(a.type);
  team_[a.id] = Teammate{type, teammates::sample_memory(type, team_rng_)};
  if (auto* s = std::get_if<envs::LbfState>(&state_)) {
    envs::lbf_add_agent(*s, a.id, env_rng_);
  } else {
    envs::wolf_add_agent(std::get<envs::WolfState>(state_), a.id, env_rng_);
  }
}

void OpenGame::depart(AgentId id) {
  team_.erase(id);
  if (auto* s = std::get_if<envs::LbfState>(&state_)) {
    envs::lbf_remove_agent(*s, id);
  } else {
    envs::wolf_remove_agent(std::get<envs::WolfState>(state_), id);
  }
}

envs::Observation OpenGame::observe() const {
  return std::visit([](const auto& s) { return envs::encode_obs(s); }, state_);
}

int OpenGame::num_actions() const { return cfg_.env == EnvKind::lbf ? envs::kLbfActions : envs::kWolfActions; }

osbg::JointAgentAction OpenGame::teammate_actions() {
  osbg::JointAgentAction joint;
  for (const auto& [id, tm] : team_) {
    int a;
    if (const auto* s = lbf()) {
      a = teammates::lbf_act(tm.type, *s, id, tm.memory, team_rng_);
    } else {
      a = teammates::wolf_act(tm.type, *wolf(), id, tm.memory, team_rng_);
    }
    joint.set(id, a);
  }
  return joint;
}

StepOutcome OpenGame::step(int learner_action) {
  osbg::JointAgentAction joint = teammate_actions();
  joint.set(osbg::kLearnerId, learner_action);
  return step(joint);
}

StepOutcome OpenGame::step(const osbg::JointAgentAction& joint) {
  for (const auto& [id, a] : joint.entries())
    if (!roster_.contains(id)) throw std::invalid_argument("joint action names agent " + std::to_string(id) +
                                                           " which is not in the roster");
  envs::StepResult r;
  if (auto* s = std::get_if<envs::LbfState>(&state_)) {
    r = envs::lbf_step(*s, joint);
  } else {
    r = envs::wolf_step(std::get<envs::WolfState>(state_), joint, env_rng_);
  }
  ++step_;
  StepOutcome out{r.reward, r.done, {}};
  if (r.done) return out;
  out.events = osbg::roster_step(roster_, open_rng_, cfg_.openness, step_);
  for (AgentId id : out.events.departures) depart(id);
  for (const auto& a : out.events.arrivals) admit(a);
  return out;
}

}  // namespace openteam::world
