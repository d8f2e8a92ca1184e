#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace openteam::osbg {

using AgentId = std::uint32_t;
using Rng = std::mt19937_64;

inline constexpr AgentId kLearnerId = 0;

// One action per agent, kept sorted by agent id.
class JointAgentAction {
 public:
  void set(AgentId id, int action);  // throws if `id` already has an action
  int at(AgentId id) const;          // throws if missing
  bool contains(AgentId id) const;
  std::size_t size() const { return entries_.size(); }
  const std::vector<std::pair<AgentId, int>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<AgentId, int>> entries_;
};

struct DurationRange {
  int lo = 1;
  int hi = 1;
};

struct OpennessConfig {
  DurationRange active{25, 35};
  DurationRange waiting{15, 25};
  int team_limit = 3;  // learner included
  // Teammate seats cycling between the team and the waiting pool; 0 means team_limit.
  int population = 0;
  std::vector<std::string> type_pool;

  int seats() const { return population > 0 ? population : team_limit; }
  void validate() const;  // throws std::invalid_argument
};

struct Member {
  std::string type;
  int arrival_step = 0;
  int remaining = 0;
};

struct Arrival {
  AgentId id = 0;
  std::string type;
  int active_duration = 0;
};

struct RosterEvents {
  std::vector<AgentId> departures;
  std::vector<Arrival> arrivals;
  std::vector<int> waiting_durations;  // sampled for this step's departures, in order
};

class Roster {
 public:
  const std::map<AgentId, Member>& members() const { return members_; }  // learner included
  std::size_t size() const { return members_.size(); }
  bool contains(AgentId id) const { return members_.count(id) != 0; }
  const Member& member(AgentId id) const { return members_.at(id); }
  // Learner first, then teammates by ascending id.
  std::vector<AgentId> ids() const;
  std::vector<AgentId> teammates() const;
  // Release steps of waiting seats in FIFO order.
  const std::deque<int>& waiting() const { return waiting_; }
  AgentId next_id() const { return next_id_; }

 private:
  friend Roster reset_roster(Rng& rng, const OpennessConfig& cfg, RosterEvents* events);
  friend RosterEvents roster_step(Roster& roster, Rng& rng, const OpennessConfig& cfg, int step);

  std::map<AgentId, Member> members_;
  std::deque<int> waiting_;
  AgentId next_id_ = kLearnerId + 1;
};

// Learner plus Uniform{0..limit-1} teammates (capped by the seat count); the
// remaining seats start in the waiting pool with sampled waiting durations.
Roster reset_roster(Rng& rng, const OpennessConfig& cfg, RosterEvents* events = nullptr);

// Advances openness by one environment step that has just completed at `step`.
RosterEvents roster_step(Roster& roster, Rng& rng, const OpennessConfig& cfg, int step);

}  // namespace openteam::osbg
