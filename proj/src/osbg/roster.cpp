#include "openteam/osbg/roster.hpp"

#include <algorithm>
#include <stdexcept>

namespace openteam::osbg {

void JointAgentAction::set(AgentId id, int action) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const auto& e, AgentId key) { return e.first < key; });
  if (it != entries_.end() && it->first == id)
    throw std::invalid_argument("joint action already holds an action for agent " + std::to_string(id));
  entries_.insert(it, {id, action});
}

int JointAgentAction::at(AgentId id) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const auto& e, AgentId key) { return e.first < key; });
  if (it == entries_.end() || it->first != id)
    throw std::invalid_argument("joint action has no action for agent " + std::to_string(id));
  return it->second;
}

bool JointAgentAction::contains(AgentId id) const {
  return std::binary_search(entries_.begin(), entries_.end(), std::pair<AgentId, int>{id, 0},
                            [](const auto& a, const auto& b) { return a.first < b.first; });
}

void OpennessConfig::validate() const {
  if (active.lo < 1 || active.lo > active.hi) throw std::invalid_argument("openness: bad active duration range");
  if (waiting.lo < 0 || waiting.lo > waiting.hi) throw std::invalid_argument("openness: bad waiting duration range");
  if (team_limit < 1) throw std::invalid_argument("openness: team limit must be at least 1");
  if (population < 0) throw std::invalid_argument("openness: population must be non-negative");
  if (type_pool.empty() && team_limit > 1) throw std::invalid_argument("openness: empty type pool");
}

std::vector<AgentId> Roster::ids() const {
  std::vector<AgentId> out;
  out.reserve(members_.size());
  for (const auto& [id, m] : members_) out.push_back(id);
  return out;
}

std::vector<AgentId> Roster::teammates() const {
  std::vector<AgentId> out;
  for (const auto& [id, m] : members_)
    if (id != kLearnerId) out.push_back(id);
  return out;
}

namespace {

int uniform_int(Rng& rng, DurationRange r) { return std::uniform_int_distribution<int>(r.lo, r.hi)(rng); }

Arrival admit(std::map<AgentId, Member>& members, AgentId& next_id, Rng& rng, const OpennessConfig& cfg,
              int step) {
  Arrival a;
  a.id = next_id++;
  a.type = cfg.type_pool[std::uniform_int_distribution<std::size_t>(0, cfg.type_pool.size() - 1)(rng)];
  a.active_duration = uniform_int(rng, cfg.active);
  members[a.id] = Member{a.type, step, a.active_duration};
  return a;
}

}  // namespace

Roster reset_roster(Rng& rng, const OpennessConfig& cfg, RosterEvents* events) {
  cfg.validate();
  Roster r;
  r.members_[kLearnerId] = Member{"learner", 0, 0};
  const int seats = cfg.team_limit > 1 ? cfg.seats() : 0;
  const int initial = std::min(seats, std::uniform_int_distribution<int>(0, cfg.team_limit - 1)(rng));
  for (int i = 0; i < initial; ++i) {
    Arrival a = admit(r.members_, r.next_id_, rng, cfg, 0);
    if (events) events->arrivals.push_back(std::move(a));
  }
  std::vector<int> waits;
  for (int i = initial; i < seats; ++i) waits.push_back(uniform_int(rng, cfg.waiting));
  std::sort(waits.begin(), waits.end());
  r.waiting_.assign(waits.begin(), waits.end());
  if (events) events->waiting_durations = waits;
  return r;
}

RosterEvents roster_step(Roster& roster, Rng& rng, const OpennessConfig& cfg, int step) {
  RosterEvents ev;
  for (auto it = roster.members_.begin(); it != roster.members_.end();) {
    if (it->first == kLearnerId) {
      ++it;
      continue;
    }
    if (--it->second.remaining == 0) {
      ev.departures.push_back(it->first);
      const int wait = uniform_int(rng, cfg.waiting);
      ev.waiting_durations.push_back(wait);
      roster.waiting_.push_back(step + wait);
      it = roster.members_.erase(it);
    } else {
      ++it;
    }
  }
  // Seats are released in FIFO order; a seat whose release step has passed but
  // found the team full keeps its place at the head of the queue.
  std::stable_sort(roster.waiting_.begin(), roster.waiting_.end());
  while (!roster.waiting_.empty() && roster.waiting_.front() <= step &&
         int(roster.members_.size()) < cfg.team_limit) {
    roster.waiting_.pop_front();
    ev.arrivals.push_back(admit(roster.members_, roster.next_id_, rng, cfg, step));
  }
  return ev;
}

}  // namespace openteam::osbg
