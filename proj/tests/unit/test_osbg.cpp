#include <gtest/gtest.h>

#include <map>
#include <set>

#include "openteam/osbg/roster.hpp"
#include "test_support.hpp"

namespace openteam::osbg {
namespace {

using testing::chi_square_critical_p01;
using testing::chi_square_uniform;

OpennessConfig wolf_cfg(int limit = 3) {
  OpennessConfig c;
  c.active = {25, 35};
  c.waiting = {15, 25};
  c.team_limit = limit;
  c.type_pool = {"wolf.H1", "wolf.H2", "wolf.H3", "wolf.H4"};
  return c;
}

OpennessConfig lbf_cfg(int limit = 3) {
  OpennessConfig c;
  c.active = {15, 25};
  c.waiting = {10, 20};
  c.team_limit = limit;
  c.type_pool = {"lbf.H1", "lbf.H2", "lbf.H3"};
  return c;
}

TEST(JointAgentAction, OneActionPerAgent) {
  JointAgentAction a;
  a.set(3, 1);
  a.set(0, 4);
  EXPECT_THROW(a.set(3, 2), std::invalid_argument);
  EXPECT_EQ(a.at(0), 4);
  EXPECT_EQ(a.at(3), 1);
  EXPECT_THROW(a.at(7), std::invalid_argument);
  EXPECT_EQ(a.entries().front().first, 0u);
}

TEST(OpennessConfig, Validation) {
  OpennessConfig c = wolf_cfg();
  c.active = {5, 4};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = wolf_cfg();
  c.team_limit = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(ResetRoster, LimitOneIsLearnerOnly) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const Roster r = reset_roster(rng, wolf_cfg(1));
    EXPECT_EQ(r.size(), 1u);
    EXPECT_TRUE(r.contains(kLearnerId));
  }
}

TEST(ResetRoster, TeammateCountWithinLimitAndUniform) {
  Rng rng(2);
  std::vector<long> counts(3, 0);
  for (int i = 0; i < 10000; ++i) {
    const Roster r = reset_roster(rng, wolf_cfg(3));
    ASSERT_GE(r.size(), 1u);
    ASSERT_LE(r.size(), 3u);
    ++counts[r.size() - 1];
  }
  EXPECT_LT(chi_square_uniform(counts), chi_square_critical_p01(2));
}

TEST(ResetRoster, TypeFrequenciesUniform) {
  Rng rng(13);
  const auto cfg = wolf_cfg(3);
  std::map<std::string, long> freq;
  long draws = 0;
  while (draws < 10000) {
    const Roster r = reset_roster(rng, cfg);
    for (AgentId id : r.teammates()) {
      ++freq[r.member(id).type];
      ++draws;
    }
  }
  std::vector<long> counts;
  for (const auto& t : cfg.type_pool) counts.push_back(freq[t]);
  EXPECT_LT(chi_square_uniform(counts), chi_square_critical_p01(cfg.type_pool.size() - 1));
}

TEST(RosterStep, LimitOneNeverAdmits) {
  Rng rng(4);
  const auto cfg = wolf_cfg(1);
  Roster r = reset_roster(rng, cfg);
  for (int s = 1; s <= 1000; ++s) {
    const auto ev = roster_step(r, rng, cfg, s);
    EXPECT_TRUE(ev.arrivals.empty());
    EXPECT_EQ(r.size(), 1u);
  }
}

void check_durations(const OpennessConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  Roster r = reset_roster(rng, cfg);
  std::map<AgentId, int> admitted_with, present;
  for (AgentId id : r.teammates()) {
    admitted_with[id] = r.member(id).remaining;
    present[id] = 0;
  }
  std::vector<long> active_hist(cfg.active.hi - cfg.active.lo + 1, 0);
  std::vector<long> wait_hist(cfg.waiting.hi - cfg.waiting.lo + 1, 0);
  std::map<std::string, long> types;
  for (int s = 1; s <= 10000; ++s) {
    for (auto& [id, n] : present) ++n;
    const auto ev = roster_step(r, rng, cfg, s);
    for (AgentId id : ev.departures) {
      EXPECT_EQ(present.at(id), admitted_with.at(id));
      present.erase(id);
    }
    for (int w : ev.waiting_durations) {
      ASSERT_GE(w, cfg.waiting.lo);
      ASSERT_LE(w, cfg.waiting.hi);
      ++wait_hist[w - cfg.waiting.lo];
    }
    for (const auto& a : ev.arrivals) {
      ASSERT_GE(a.active_duration, cfg.active.lo);
      ASSERT_LE(a.active_duration, cfg.active.hi);
      ++active_hist[a.active_duration - cfg.active.lo];
      ++types[a.type];
      admitted_with[a.id] = a.active_duration;
      present[a.id] = 0;
    }
    ASSERT_LE(int(r.size()), cfg.team_limit);
  }
  EXPECT_LT(chi_square_uniform(active_hist), chi_square_critical_p01(active_hist.size() - 1));
  EXPECT_LT(chi_square_uniform(wait_hist), chi_square_critical_p01(wait_hist.size() - 1));
  std::vector<long> type_counts;
  for (const auto& t : cfg.type_pool) type_counts.push_back(types[t]);
  EXPECT_LT(chi_square_uniform(type_counts), chi_square_critical_p01(type_counts.size() - 1));
}

TEST(RosterStep, WolfpackDurationsAndTypes) { check_durations(wolf_cfg(3), 5); }
TEST(RosterStep, LbfDurationsAndTypes) { check_durations(lbf_cfg(3), 6); }
TEST(RosterStep, EvalLimitFive) { check_durations(wolf_cfg(5), 7); }

TEST(RosterStep, BlockedSeatsWaitFifo) {
  // Four seats but room for only two teammates: the blocked seat enters as
  // soon as a teammate departs, in release order.
  OpennessConfig cfg = wolf_cfg(3);
  cfg.population = 4;
  cfg.active = {3, 3};
  cfg.waiting = {1, 1};
  Rng rng(8);
  Roster r = reset_roster(rng, cfg);
  int blocked_steps = 0;
  for (int s = 1; s <= 200; ++s) {
    const bool full_before = int(r.size()) == cfg.team_limit;
    roster_step(r, rng, cfg, s);
    EXPECT_LE(int(r.size()), cfg.team_limit);
    EXPECT_EQ(int(r.size()) - 1 + int(r.waiting().size()), cfg.population);
    if (full_before && !r.waiting().empty() && r.waiting().front() < s) ++blocked_steps;
  }
  EXPECT_GT(blocked_steps, 0);
}

TEST(RosterStep, IdsNeverReused) {
  Rng rng(9);
  auto cfg = lbf_cfg(3);
  Roster r = reset_roster(rng, cfg);
  std::set<AgentId> seen;
  for (AgentId id : r.teammates()) seen.insert(id);
  for (int s = 1; s <= 2000; ++s) {
    const auto ev = roster_step(r, rng, cfg, s);
    for (const auto& a : ev.arrivals) EXPECT_TRUE(seen.insert(a.id).second);
  }
}

TEST(RosterStep, DeterministicGivenSeed) {
  auto trace = [](std::uint64_t seed) {
    Rng rng(seed);
    const auto cfg = wolf_cfg(3);
    Roster r = reset_roster(rng, cfg);
    std::vector<std::vector<AgentId>> out;
    for (int s = 1; s <= 500; ++s) {
      roster_step(r, rng, cfg, s);
      out.push_back(r.ids());
    }
    return out;
  };
  EXPECT_EQ(trace(11), trace(11));
}

}  // namespace
}  // namespace openteam::osbg
