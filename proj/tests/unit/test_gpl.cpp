#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "openteam/gpl/baseline.hpp"
#include "openteam/gpl/embedding_store.hpp"
#include "openteam/gpl/learner.hpp"
#include "openteam/gpl/network.hpp"
#include "openteam/gpl/train.hpp"
#include "openteam/gpl/values.hpp"
#include "openteam/tensor/grad_check.hpp"
#include "openteam/verify/suites.hpp"
#include "test_support.hpp"

namespace openteam::gpl {
namespace {

using osbg::JointAgentAction;
using osbg::kLearnerId;
using tensor::Tape;
using testing::chi_square_critical_p01;
using testing::chi_square_uniform;
using testing::random_tensor;
using testing::zeroed;

UtilityTables make_tables(Rng& rng, std::size_t agents, std::size_t actions, std::size_t rank) {
  UtilityTables t;
  for (std::size_t j = 0; j < agents; ++j) t.ids.push_back(AgentId(j));
  t.actions = actions;
  t.rank = rank;
  t.singular = random_tensor({agents, actions}, rng);
  t.factors = random_tensor({agents, rank * actions}, rng);
  return t;
}

AgentModelOutput make_probs(Rng& rng, const UtilityTables& t) {
  AgentModelOutput out;
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (std::size_t j = 1; j < t.ids.size(); ++j) {
    std::vector<double> p(t.actions);
    for (double& v : p) v = d(rng) + 1e-3;
    const double z = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& v : p) v /= z;
    out[t.ids[j]] = p;
  }
  return out;
}

double pair_oracle(const UtilityTables& t, std::size_t j, std::size_t k, std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t m = 0; m < t.rank; ++m) s += t.factors.at(j, m * t.actions + a) * t.factors.at(k, m * t.actions + b);
  return s;
}

double joint_oracle(const UtilityTables& t, const std::vector<int>& a) {
  double s = 0.0;
  for (std::size_t j = 0; j < t.ids.size(); ++j) {
    s += t.singular.at(j, std::size_t(a[j]));
    for (std::size_t k = 0; k < t.ids.size(); ++k)
      if (k != j) s += pair_oracle(t, j, k, std::size_t(a[j]), std::size_t(a[k]));
  }
  return s;
}

JointAgentAction to_joint(const UtilityTables& t, const std::vector<int>& a) {
  JointAgentAction j;
  for (std::size_t r = 0; r < a.size(); ++r) j.set(t.ids[r], a[r]);
  return j;
}

// Expectation of joint_oracle over teammate actions, by enumeration.
std::vector<double> expectation_oracle(const UtilityTables& t, const AgentModelOutput& probs) {
  const std::size_t n = t.ids.size(), A = t.actions;
  std::vector<double> q(A, 0.0);
  std::size_t combos = 1;
  for (std::size_t j = 1; j < n; ++j) combos *= A;
  for (std::size_t a = 0; a < A; ++a)
    for (std::size_t code = 0; code < combos; ++code) {
      std::vector<int> acts{int(a)};
      double w = 1.0;
      std::size_t rest = code;
      for (std::size_t j = 1; j < n; ++j) {
        acts.push_back(int(rest % A));
        w *= probs.at(t.ids[j])[rest % A];
        rest /= A;
      }
      q[a] += w * joint_oracle(t, acts);
    }
  return q;
}

// ---- joint action values ----

TEST(JointQ, AllZeroUtilitiesGiveZero) {
  Rng rng(1);
  UtilityTables t = make_tables(rng, 3, 4, 2);
  t.singular.fill(0.0);
  t.factors.fill(0.0);
  EXPECT_EQ(joint_q(t, to_joint(t, {1, 2, 3})), 0.0);
}

TEST(JointQ, LearnerAloneIsItsSingularUtility) {
  Rng rng(2);
  const UtilityTables t = make_tables(rng, 1, 5, 3);
  for (int a = 0; a < 5; ++a) EXPECT_EQ(joint_q(t, to_joint(t, {a})), t.singular.at(0, std::size_t(a)));
}

TEST(JointQ, MatchesTermByTermEnumeration) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const std::size_t A = testing::random_dim(rng, 2, 6);
    const UtilityTables t = make_tables(rng, 3, A, 5);
    std::vector<int> a(3);
    for (int& v : a) v = std::uniform_int_distribution<int>(0, int(A) - 1)(rng);
    EXPECT_NEAR(joint_q(t, to_joint(t, a)), joint_oracle(t, a), 1e-12);
  }
}

TEST(JointQ, MissingActionRejected) {
  Rng rng(4);
  const UtilityTables t = make_tables(rng, 2, 3, 1);
  JointAgentAction a;
  a.set(0, 1);
  EXPECT_THROW(joint_q(t, a), std::invalid_argument);
}

TEST(Pairwise, RankOneIsOuterProduct) {
  UtilityTables t;
  t.ids = {0, 1};
  t.rank = 1;
  t.actions = 3;
  t.singular = Tensor({2, 3});
  t.factors = Tensor::matrix({{1, 2, 3}, {-1, 0.5, 4}});
  const Tensor p = t.pairwise(0, 1);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(p.at(a, b), t.factors.at(0, a) * t.factors.at(1, b));
}

TEST(Pairwise, EqualsElementwiseFactorSum) {
  Rng rng(5);
  const UtilityTables t = make_tables(rng, 4, 6, 5);
  for (AgentId j = 0; j < 4; ++j)
    for (AgentId k = 0; k < 4; ++k)
      for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b)
          EXPECT_NEAR(t.pairwise(j, k).at(a, b), pair_oracle(t, j, k, a, b), 1e-12);
}

TEST(Pairwise, ReversedPairIsTranspose) {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const UtilityTables t = make_tables(rng, 3, testing::random_dim(rng, 2, 6), testing::random_dim(rng, 1, 5));
    const Tensor jk = t.pairwise(1, 2), kj = t.pairwise(2, 1);
    for (std::size_t a = 0; a < t.actions; ++a)
      for (std::size_t b = 0; b < t.actions; ++b) EXPECT_NEAR(jk.at(a, b), kj.at(b, a), 1e-12);
  }
}

TEST(Pairwise, UnknownAgentRejected) {
  Rng rng(7);
  const UtilityTables t = make_tables(rng, 2, 3, 1);
  EXPECT_THROW(t.pairwise(0, 9), std::invalid_argument);
}

// ---- marginalized action values ----

TEST(MarginalQ, NoTeammatesGivesSingularUtility) {
  Rng rng(8);
  const UtilityTables t = make_tables(rng, 1, 4, 5);
  const auto q = marginal_q(t, {}, kLearnerId);
  for (std::size_t a = 0; a < 4; ++a) EXPECT_EQ(q[a], t.singular.at(0, a));
}

TEST(MarginalQ, PointMassTeammateReducesToThatAction) {
  Rng rng(9);
  const UtilityTables t = make_tables(rng, 2, 5, 3);
  AgentModelOutput probs{{1, {0, 0, 1, 0, 0}}};
  const auto q = marginal_q(t, probs, kLearnerId);
  for (std::size_t a = 0; a < 5; ++a) {
    // Both ordered pairs (learner, j) and (j, learner) appear in the joint value.
    const double expect = t.singular.at(0, a) + t.singular.at(1, 2) + pair_oracle(t, 0, 1, a, 2) + pair_oracle(t, 1, 0, 2, a);
    EXPECT_NEAR(q[a], expect, 1e-12);
  }
}

TEST(MarginalQ, EqualsExpectedJointValue) {
  Rng rng(10);
  for (int i = 0; i < 300; ++i) {
    const std::size_t mates = testing::random_dim(rng, 2, 4), A = testing::random_dim(rng, 2, 6);
    const UtilityTables t = make_tables(rng, mates + 1, A, testing::random_dim(rng, 1, 5));
    const auto probs = make_probs(rng, t);
    const auto fast = marginal_q(t, probs, kLearnerId);
    const auto slow = expectation_oracle(t, probs);
    for (std::size_t a = 0; a < A; ++a) EXPECT_NEAR(fast[a], slow[a], 1e-6 * std::max(1.0, std::abs(slow[a])));
  }
}

TEST(MarginalQ, ShiftingLearnerSingularShiftsEveryValue) {
  Rng rng(11);
  UtilityTables t = make_tables(rng, 3, 5, 2);
  const auto probs = make_probs(rng, t);
  const auto before = marginal_q(t, probs, kLearnerId);
  for (std::size_t a = 0; a < 5; ++a) t.singular.at(0, a) += 2.5;
  const auto after = marginal_q(t, probs, kLearnerId);
  for (std::size_t a = 0; a < 5; ++a) EXPECT_NEAR(after[a], before[a] + 2.5, 1e-12);
  EXPECT_EQ(std::max_element(after.begin(), after.end()) - after.begin(),
            std::max_element(before.begin(), before.end()) - before.begin());
}

TEST(MarginalQ, MissingProbabilitiesRejected) {
  Rng rng(12);
  const UtilityTables t = make_tables(rng, 3, 3, 1);
  AgentModelOutput probs{{1, {1.0, 0.0, 0.0}}};
  EXPECT_THROW(marginal_q(t, probs, kLearnerId), std::invalid_argument);
}

// ---- policies and targets ----

TEST(Spi, EqualValuesGiveUniform) {
  for (double p : spi_policy({3.0, 3.0, 3.0, 3.0}, 0.1)) EXPECT_NEAR(p, 0.25, 1e-12);
}

TEST(Spi, HighTemperatureIsNearUniform) {
  for (double p : spi_policy({5.0, -3.0, 0.0}, 1e6)) EXPECT_NEAR(p, 1.0 / 3.0, 1e-4);
}

TEST(Spi, TwoActionClosedForm) {
  const auto p = spi_policy({1.0, 0.0}, 1.0);
  EXPECT_NEAR(p[0], std::exp(1.0) / (std::exp(1.0) + 1.0), 1e-12);
  EXPECT_NEAR(p[1], 1.0 / (std::exp(1.0) + 1.0), 1e-12);
  EXPECT_NEAR(p[0], 0.7311, 1e-4);
}

TEST(Spi, NonPositiveTemperatureRejected) {
  EXPECT_THROW(spi_policy({1.0, 2.0}, 0.0), std::invalid_argument);
  EXPECT_THROW(spi_policy({1.0, 2.0}, -1.0), std::invalid_argument);
}

TEST(TdTarget, ZeroDiscountIsReward) {
  EXPECT_EQ(td_target(1.5, {4.0, 9.0}, TargetMode::q_learning, 0.0, 0.1), 1.5);
  EXPECT_EQ(td_target(1.5, {4.0, 9.0}, TargetMode::spi, 0.0, 0.1), 1.5);
}

TEST(TdTarget, QLearningUsesMax) {
  EXPECT_NEAR(td_target(1.0, {0.5, 2.0, -1.0}, TargetMode::q_learning, 0.9, 0.1), 2.8, 1e-12);
}

TEST(TdTarget, TerminalUsesReward) {
  EXPECT_EQ(td_target(-0.5, {4.0, 9.0}, TargetMode::q_learning, 0.99, 0.1, true), -0.5);
}

TEST(TdTarget, SpiIsBoltzmannExpectation) {
  const std::vector<double> q{1.0, 0.0};
  const double p0 = std::exp(1.0) / (std::exp(1.0) + 1.0);
  EXPECT_NEAR(td_target(0.5, q, TargetMode::spi, 0.9, 1.0), 0.5 + 0.9 * p0, 1e-12);
}

TEST(TdTarget, LowTemperatureSpiMatchesQLearning) {
  Rng rng(13);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> q(testing::random_dim(rng, 2, 6));
    for (double& v : q) v = d(rng);
    const double r = d(rng);
    const double yq = td_target(r, q, TargetMode::q_learning, 0.99, 1e-6);
    const double ys = td_target(r, q, TargetMode::spi, 0.99, 1e-6);
    EXPECT_LE(std::abs(ys - yq), 1e-3 * (1.0 + std::abs(yq)));
  }
}

// ---- losses ----

TEST(ValueLoss, Examples) {
  EXPECT_EQ(value_loss(2.0, 2.0), 0.0);
  EXPECT_EQ(value_loss(3.0, 1.0), 2.0);
}

TEST(ValueLoss, GradientIsResidual) {
  Tape tape;
  Var joint = tape.leaf(Tensor::vector({3.0, -1.0}));
  const auto g = tape.backward(tape::value_loss(joint, {1.0, 0.5})).get(joint);
  EXPECT_NEAR(g[0], 2.0, 1e-12);
  EXPECT_NEAR(g[1], -1.5, 1e-12);
  tensor::ScalarFn f = [](Tape&, Var x) { return tape::value_loss(x, {0.3, -0.2, 1.0}); };
  Rng rng(14);
  EXPECT_LE(tensor::grad_check(f, random_tensor({3}, rng)), 1e-6);
}

TEST(AgentModelLoss, PointMassOnObservedActionsIsZero) {
  JointAgentAction a;
  a.set(0, 4);
  a.set(1, 2);
  a.set(2, 0);
  const AgentModelOutput probs{{1, {0, 0, 1, 0, 0}}, {2, {1, 0, 0, 0, 0}}};
  const auto r = agent_model_loss(probs, a);
  EXPECT_EQ(r.loss, 0.0);
  EXPECT_EQ(r.floored, 0);
}

TEST(AgentModelLoss, UniformOverFiveActions) {
  JointAgentAction a;
  a.set(0, 0);
  a.set(1, 3);
  a.set(2, 1);
  const std::vector<double> u(5, 0.2);
  EXPECT_NEAR(agent_model_loss({{1, u}, {2, u}}, a).loss, 2.0 * std::log(5.0), 1e-12);
  EXPECT_NEAR(agent_model_loss({{1, u}, {2, u}}, a).loss, 3.2189, 1e-4);
}

TEST(AgentModelLoss, EqualsNegativeLogOfProduct) {
  Rng rng(15);
  for (int i = 0; i < 50; ++i) {
    const UtilityTables t = make_tables(rng, 4, 5, 1);
    const auto probs = make_probs(rng, t);
    JointAgentAction a;
    a.set(0, 0);
    double product = 1.0;
    for (AgentId j = 1; j < 4; ++j) {
      const int act = std::uniform_int_distribution<int>(0, 4)(rng);
      a.set(j, act);
      product *= probs.at(j)[std::size_t(act)];
    }
    EXPECT_NEAR(agent_model_loss(probs, a).loss, -std::log(product), 1e-10);
  }
}

TEST(AgentModelLoss, ZeroProbabilityIsFlooredAndFlagged) {
  JointAgentAction a;
  a.set(0, 0);
  a.set(1, 1);
  const auto r = agent_model_loss({{1, {1.0, 0.0}}}, a);
  EXPECT_NEAR(r.loss, -std::log(kProbabilityFloor), 1e-9);
  EXPECT_EQ(r.floored, 1);
}

TEST(AgentModelLoss, TapeVersionMatchesAndFloorHasNoGradient) {
  Tape tape;
  Var p = tape.leaf(Tensor::matrix({{0.5, 0.5, 0.0}, {0.2, 0.0, 0.8}, {0.1, 0.6, 0.3}}));
  int floored = 0;
  Var loss = tape::agent_model_loss(p, {1, 2}, {1, 1}, &floored);
  EXPECT_EQ(floored, 1);
  EXPECT_NEAR(loss.value().item(), -std::log(kProbabilityFloor) - std::log(0.6), 1e-9);
  const Tensor g = tape.backward(loss).get(p);
  EXPECT_EQ(g.at(1, 1), 0.0);
  EXPECT_NEAR(g.at(2, 1), -1.0 / 0.6, 1e-12);
  EXPECT_EQ(g.at(0, 0), 0.0);
}

TEST(AgentModelLoss, NoTeammatesIsZero) {
  Tape tape;
  Var p = tape.leaf(Tensor::matrix({{0.5, 0.5}}));
  EXPECT_EQ(tape::agent_model_loss(p, {}, {}).value().item(), 0.0);
}

TEST(TapeJointQ, MatchesPlainValuePerGroup) {
  Rng rng(16);
  for (int i = 0; i < 50; ++i) {
    const std::size_t A = testing::random_dim(rng, 2, 6), K = testing::random_dim(rng, 1, 5);
    std::vector<UtilityTables> groups;
    std::vector<std::size_t> offsets{0};
    for (std::size_t g = 0; g < testing::random_dim(rng, 1, 4); ++g) {
      groups.push_back(make_tables(rng, testing::random_dim(rng, 1, 4), A, K));
      offsets.push_back(offsets.back() + groups.back().ids.size());
    }
    Tensor s({offsets.back(), A}), f({offsets.back(), K * A});
    std::vector<int> acts;
    std::vector<double> expect;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::vector<int> a;
      for (std::size_t r = 0; r < groups[g].ids.size(); ++r) {
        a.push_back(std::uniform_int_distribution<int>(0, int(A) - 1)(rng));
        std::copy_n(groups[g].singular.ptr() + r * A, A, s.ptr() + (offsets[g] + r) * A);
        std::copy_n(groups[g].factors.ptr() + r * K * A, K * A, f.ptr() + (offsets[g] + r) * K * A);
      }
      acts.insert(acts.end(), a.begin(), a.end());
      expect.push_back(joint_oracle(groups[g], a));
    }
    Tape tape;
    const Tensor out = tape::joint_q(tape.leaf(s), tape.leaf(f), K, A, acts, offsets).value();
    for (std::size_t g = 0; g < groups.size(); ++g) EXPECT_NEAR(out[g], expect[g], 1e-12);
  }
}

// ---- acting ----

TEST(Act, FullEpsilonIsUniform) {
  Rng rng(17);
  std::vector<long> counts(5, 0);
  for (int i = 0; i < 10000; ++i) ++counts[std::size_t(act({0, 1, 5, 2, 3}, {TargetMode::q_learning, 1.0, 0.1}, rng))];
  EXPECT_LT(chi_square_uniform(counts), chi_square_critical_p01(4));
}

TEST(Act, ZeroEpsilonPicksUniqueArgmax) {
  Rng rng(18);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(act({0, 1, 5, 2, 3}, {TargetMode::q_learning, 0.0, 0.1}, rng), 2);
}

TEST(Act, HalfEpsilonMixture) {
  Rng rng(19);
  int greedy = 0;
  for (int i = 0; i < 10000; ++i) greedy += act({0, 1, 5, 2, 3}, {TargetMode::q_learning, 0.5, 0.1}, rng) == 2;
  EXPECT_NEAR(greedy / 10000.0, 0.6, 0.02);
}

TEST(Act, TiesBrokenUniformly) {
  Rng rng(20);
  std::vector<long> counts(3, 0);
  for (int i = 0; i < 9000; ++i) {
    const int a = act({4, 1, 4, 4}, {TargetMode::q_learning, 0.0, 0.1}, rng);
    ASSERT_NE(a, 1);
    ++counts[a == 0 ? 0 : std::size_t(a - 1)];
  }
  EXPECT_LT(chi_square_uniform(counts), chi_square_critical_p01(2));
}

TEST(Act, SpiSamplesBoltzmann) {
  Rng rng(21);
  int first = 0;
  for (int i = 0; i < 10000; ++i) first += act({1.0, 0.0}, {TargetMode::spi, 0.0, 1.0}, rng) == 0;
  EXPECT_NEAR(first / 10000.0, std::exp(1.0) / (std::exp(1.0) + 1.0), 0.02);
}

// ---- recurrent state bookkeeping ----

EmbeddingStore filled_store(const std::vector<AgentId>& ids, Rng& rng) {
  EmbeddingStore s(3);
  s.preprocess({}, ids);
  const Tensor h = random_tensor({ids.size(), 3}, rng), c = random_tensor({ids.size(), 3}, rng);
  for (auto m : {EmbeddingStore::value, EmbeddingStore::model, EmbeddingStore::target}) s.scatter(m, ids, h, c, 0);
  return s;
}

TEST(EmbeddingStore, DepartureAndArrivals) {
  Rng rng(22);
  EmbeddingStore s = filled_store({1, 2, 3}, rng);
  const EmbeddingStore before = s;
  const AgentId departed[] = {3}, arrived[] = {4, 5};
  s.preprocess(departed, arrived);
  EXPECT_EQ(s.keys(), (std::vector<AgentId>{1, 2, 4, 5}));
  for (auto m : {EmbeddingStore::value, EmbeddingStore::model, EmbeddingStore::target}) {
    EXPECT_EQ(s.get(m, 1), before.get(m, 1));
    EXPECT_EQ(s.get(m, 2), before.get(m, 2));
    EXPECT_EQ(s.get(m, 4), (Hidden{{0, 0, 0}, {0, 0, 0}}));
    EXPECT_EQ(s.get(m, 5), (Hidden{{0, 0, 0}, {0, 0, 0}}));
    EXPECT_THROW(s.get(m, 3), std::out_of_range);
  }
}

TEST(EmbeddingStore, NoMembershipChangeIsIdentity) {
  Rng rng(23);
  EmbeddingStore s = filled_store({0, 4, 7}, rng);
  const EmbeddingStore before = s;
  s.preprocess({}, {});
  EXPECT_EQ(s, before);
}

TEST(EmbeddingStore, ClearThenInitialRosterIsAllZero) {
  Rng rng(24);
  EmbeddingStore s = filled_store({0, 1, 2}, rng);
  s.clear();
  const AgentId next[] = {0, 8};
  s.preprocess({}, next);
  EXPECT_EQ(s.keys(), (std::vector<AgentId>{0, 8}));
  for (AgentId id : next) EXPECT_EQ(s.get(EmbeddingStore::value, id), (Hidden{{0, 0, 0}, {0, 0, 0}}));
}

TEST(EmbeddingStore, ArrivalAlreadyPresentRejected) {
  Rng rng(25);
  EmbeddingStore s = filled_store({0, 1}, rng);
  const AgentId again[] = {1};
  EXPECT_THROW(s.preprocess({}, again), std::invalid_argument);
}

TEST(EmbeddingStore, RandomMembershipSequences) {
  Rng rng(26);
  EmbeddingStore s(2);
  std::set<AgentId> roster{0};
  s.preprocess({}, std::vector<AgentId>{0});
  AgentId next = 1;
  for (int step = 0; step < 500; ++step) {
    const EmbeddingStore before = s;
    std::vector<AgentId> leave, join;
    for (AgentId id : roster)
      if (id != 0 && std::bernoulli_distribution(0.2)(rng)) leave.push_back(id);
    for (int k = std::uniform_int_distribution<int>(0, 2)(rng); k > 0; --k) join.push_back(next++);
    s.preprocess(leave, join);
    for (AgentId id : leave) roster.erase(id);
    for (AgentId id : before.keys())
      if (roster.count(id)) {
        for (auto m : {EmbeddingStore::value, EmbeddingStore::model, EmbeddingStore::target})
          EXPECT_EQ(s.get(m, id), before.get(m, id));
      }
    for (AgentId id : join) {
      roster.insert(id);
      EXPECT_EQ(s.get(EmbeddingStore::model, id), (Hidden{{0, 0}, {0, 0}}));
    }
    EXPECT_EQ(s.keys(), std::vector<AgentId>(roster.begin(), roster.end()));
    // Give every row fresh nonzero state for the next round.
    const auto keys = s.keys();
    const Tensor h = random_tensor({keys.size(), 2}, rng), c = random_tensor({keys.size(), 2}, rng);
    for (auto m : {EmbeddingStore::value, EmbeddingStore::model, EmbeddingStore::target}) s.scatter(m, keys, h, c, 0);
  }
}

// ---- networks ----

GplSpec small_spec(std::size_t input = 4, std::size_t actions = 5) {
  GplSpec s;
  s.input = input;
  s.actions = actions;
  s.rank = 3;
  s.embed_hidden = {6, 5};
  s.lstm = 4;
  s.beta_hidden = {5};
  s.delta_hidden = {5};
  s.edge_out = 3;
  s.node_out = 4;
  s.eta_hidden = 3;
  return s;
}

TEST(EmbedTypes, ZeroParametersAndStateGiveZero) {
  Rng rng(27);
  const GplSpec spec = small_spec();
  const ParamStore p = zeroed(init_value_params(spec, rng));
  Tape tape;
  BoundParams b(tape, p);
  auto r = embed_types(b, spec, kValuePrefix, tape.constant(random_tensor({3, 4}, rng)), tape.constant(Tensor({3, 4})),
                       tape.constant(Tensor({3, 4})));
  EXPECT_EQ(r.h.value(), Tensor({3, 4}));
}

TEST(EmbedTypes, IdenticalRowsGiveIdenticalEmbeddings) {
  Rng rng(28);
  const GplSpec spec = small_spec();
  const ParamStore p = init_value_params(spec, rng);
  Tensor x = random_tensor({2, 4}, rng), h = random_tensor({2, 4}, rng), c = random_tensor({2, 4}, rng);
  for (std::size_t k = 0; k < 4; ++k) {
    x.at(1, k) = x.at(0, k);
    h.at(1, k) = h.at(0, k);
    c.at(1, k) = c.at(0, k);
  }
  Tape tape;
  BoundParams b(tape, p);
  const Tensor out = embed_types(b, spec, kValuePrefix, tape.constant(x), tape.constant(h), tape.constant(c)).h.value();
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(out.at(0, k), out.at(1, k));
}

TEST(EmbedTypes, BatchedMatchesPerAgentLoop) {
  Rng rng(29);
  const GplSpec spec = small_spec();
  const ParamStore p = init_model_params(spec, rng);
  const Tensor x = random_tensor({4, 4}, rng), h = random_tensor({4, 4}, rng), c = random_tensor({4, 4}, rng);
  Tape tape;
  BoundParams b(tape, p);
  const auto batched = embed_types(b, spec, kModelPrefix, tape.constant(x), tape.constant(h), tape.constant(c));
  for (std::size_t r = 0; r < 4; ++r) {
    Tape one;
    BoundParams ob(one, p);
    auto row = [&](const Tensor& t) { return one.constant(Tensor({1, 4}, std::vector<double>(t.ptr() + r * 4, t.ptr() + r * 4 + 4))); };
    const auto single = embed_types(ob, spec, kModelPrefix, row(x), row(h), row(c));
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_NEAR(batched.h.value().at(r, k), single.h.value()[k], 1e-12);
      EXPECT_NEAR(batched.c.value().at(r, k), single.c.value()[k], 1e-12);
    }
  }
}

TEST(EmbedTypes, MisalignedStateRejected) {
  Rng rng(30);
  const GplSpec spec = small_spec();
  const ParamStore p = init_value_params(spec, rng);
  Tape tape;
  BoundParams b(tape, p);
  EXPECT_THROW(embed_types(b, spec, kValuePrefix, tape.constant(Tensor({3, 4})), tape.constant(Tensor({2, 4})),
                           tape.constant(Tensor({2, 4}))),
               std::invalid_argument);
}

TEST(Utilities, ZeroDeltaGivesZeroPairwise) {
  Rng rng(31);
  const GplSpec spec = small_spec();
  ParamStore p = init_value_params(spec, rng);
  for (auto& e : p.entries())
    if (e.name.starts_with("delta.")) e.value.fill(0.0);
  Groups g;
  g.add(std::vector<AgentId>{0, 3, 4});
  Tape tape;
  BoundParams b(tape, p);
  const auto t = tables_of(compute_utilities(b, spec, tape.constant(random_tensor({3, 4}, rng)), g), spec, g, 0);
  for (AgentId j : t.ids)
    for (AgentId k : t.ids) EXPECT_EQ(t.pairwise(j, k), Tensor({5, 5}));
}

TEST(Utilities, RowsUseOwnAndLearnerEmbedding) {
  Rng rng(32);
  const GplSpec spec = small_spec();
  const ParamStore p = init_value_params(spec, rng);
  Groups g;
  g.add(std::vector<AgentId>{0, 1});
  g.add(std::vector<AgentId>{0, 2, 3});
  const Tensor emb = random_tensor({5, 4}, rng);
  Tape tape;
  BoundParams b(tape, p);
  const auto u = compute_utilities(b, spec, tape.constant(emb), g);
  // Row 3 belongs to the second group, whose learner is row 2.
  Tensor pair({1, 8});
  for (std::size_t k = 0; k < 4; ++k) {
    pair[k] = emb.at(3, k);
    pair[4 + k] = emb.at(2, k);
  }
  const Tensor beta = nn::mlp_forward(b, "beta", spec.beta(), tape.constant(pair)).value();
  for (std::size_t a = 0; a < 5; ++a) EXPECT_NEAR(u.singular.value().at(3, a), beta[a], 1e-12);
}

TEST(TeammateProbs, ZeroEtaIsUniform) {
  Rng rng(33);
  const GplSpec spec = small_spec();
  ParamStore p = init_model_params(spec, rng);
  for (auto& e : p.entries())
    if (e.name.starts_with("eta.")) e.value.fill(0.0);
  Groups g;
  g.add(std::vector<AgentId>{0, 1, 2});
  Tape tape;
  BoundParams b(tape, p);
  const auto probs = probs_of(teammate_probs(b, spec, tape.constant(random_tensor({3, 4}, rng)), g).value(), g, 0);
  ASSERT_EQ(probs.size(), 2u);
  for (const auto& [_, v] : probs)
    for (double x : v) EXPECT_NEAR(x, 0.2, 1e-12);
}

TEST(TeammateProbs, NoTeammatesGiveEmptyOutput) {
  Rng rng(34);
  const GplSpec spec = small_spec();
  const ParamStore p = init_model_params(spec, rng);
  Groups g;
  g.add(std::vector<AgentId>{0});
  Tape tape;
  BoundParams b(tape, p);
  EXPECT_TRUE(probs_of(teammate_probs(b, spec, tape.constant(random_tensor({1, 4}, rng)), g).value(), g, 0).empty());
}

TEST(TeammateProbs, RowsAreDistributionsForAnyParameters) {
  Rng rng(35);
  const GplSpec spec = small_spec();
  for (int i = 0; i < 30; ++i) {
    ParamStore p = init_model_params(spec, rng);
    for (auto& e : p.entries()) e.value = random_tensor(e.value.shape(), rng, -5.0, 5.0);
    Groups g;
    g.add(std::vector<AgentId>{0, 1, 2, 3});
    Tape tape;
    BoundParams b(tape, p);
    const Tensor probs = teammate_probs(b, spec, tape.constant(random_tensor({4, 4}, rng, -3, 3)), g).value();
    for (std::size_t r = 0; r < 4; ++r) {
      double z = 0.0;
      for (std::size_t a = 0; a < 5; ++a) {
        EXPECT_GE(probs.at(r, a), 0.0);
        z += probs.at(r, a);
      }
      EXPECT_NEAR(z, 1.0, 1e-9);
    }
  }
}

TEST(TeammateProbs, GroupsDoNotInteract) {
  Rng rng(36);
  const GplSpec spec = small_spec();
  const ParamStore p = init_model_params(spec, rng);
  const Tensor emb = random_tensor({5, 4}, rng);
  Groups both;
  both.add(std::vector<AgentId>{0, 1});
  both.add(std::vector<AgentId>{0, 1, 2});
  Tape tape;
  BoundParams b(tape, p);
  const Tensor joint = teammate_probs(b, spec, tape.constant(emb), both).value();
  Groups second;
  second.add(std::vector<AgentId>{0, 1, 2});
  const Tensor alone =
      teammate_probs(b, spec, tape.constant(Tensor({3, 4}, std::vector<double>(emb.ptr() + 8, emb.ptr() + 20))), second)
          .value();
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t a = 0; a < 5; ++a) EXPECT_EQ(joint.at(2 + r, a), alone.at(r, a));
}

TEST(Network, ValueSubsetHoldsValuePathwayOnly) {
  Rng rng(37);
  const ParamStore all = init_gpl_params(small_spec(), rng);
  const ParamStore v = value_subset(all);
  EXPECT_EQ(v.size() + init_model_params(small_spec(), rng).size(), all.size());
  for (const auto& e : v.entries()) EXPECT_FALSE(e.name.starts_with("model.") || e.name.starts_with("eta."));
}

TEST(Network, AfterNoOpPreprocessValuesAreIdentical) {
  Rng rng(38);
  const GplSpec spec = small_spec();
  const ParamStore p = init_gpl_params(spec, rng);
  const std::vector<AgentId> ids{0, 2, 5};
  EmbeddingStore store = filled_store(ids, rng);
  const Tensor x = random_tensor({3, 4}, rng);
  auto values = [&](const EmbeddingStore& s) {
    Tensor h({3, 4}), c({3, 4}), hm({3, 4}), cm({3, 4});
    EmbeddingStore wide(4);
    wide.preprocess({}, ids);
    s.gather(EmbeddingStore::value, ids, h, c, 0);
    s.gather(EmbeddingStore::model, ids, hm, cm, 0);
    Groups g;
    g.add(ids);
    Tape tape;
    BoundParams b(tape, p);
    auto pad = [&](const Tensor& t) {  // store rows are 3 wide, the spec wants 4
      Tensor out({3, 4});
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t k = 0; k < 3; ++k) out.at(r, k) = t.at(r, k);
      return tape.constant(out);
    };
    auto v = embed_types(b, spec, kValuePrefix, tape.constant(x), pad(h), pad(c));
    auto m = embed_types(b, spec, kModelPrefix, tape.constant(x), pad(hm), pad(cm));
    const auto probs = probs_of(teammate_probs(b, spec, m.h, g).value(), g, 0);
    return marginal_q(tables_of(compute_utilities(b, spec, v.h, g), spec, g, 0), probs, kLearnerId);
  };
  const auto direct = values(store);
  store.preprocess({}, {});
  EXPECT_EQ(values(store), direct);
}

// ---- padded-input baselines ----

envs::Observation sample_obs(std::vector<AgentId> ids) {
  envs::Observation o;
  o.u = {7, 8};
  o.ids = ids;
  for (std::size_t r = 0; r < ids.size(); ++r) o.x.push_back({double(10 * ids[r]), double(10 * ids[r] + 1)});
  return o;
}

TEST(PadObservation, NoTeammatesFillsSentinels) {
  SlotMap slots(4);
  const auto v = pad_observation(sample_obs({0}), 4, slots);
  EXPECT_EQ(v, (std::vector<double>{0, 1, -1, -1, -1, -1, -1, -1, 7, 8}));
}

TEST(PadObservation, DepartedTeammateRevertsToSentinel) {
  Rng rng(39);
  SlotMap slots(3);
  slots.assign(4, rng);
  const std::size_t s = *slots.slot_of(4);
  auto v = pad_observation(sample_obs({0, 4}), 3, slots);
  EXPECT_EQ(v[2 * s], 40.0);
  EXPECT_EQ(v[2 * s + 1], 41.0);
  slots.release(4);
  v = pad_observation(sample_obs({0}), 3, slots);
  EXPECT_EQ(v, (std::vector<double>{0, 1, -1, -1, -1, -1, 7, 8}));
}

TEST(PadObservation, SlotStaysFixedWhileActive) {
  Rng rng(40);
  SlotMap slots(5);
  slots.assign(1, rng);
  const auto s = slots.slot_of(1);
  for (AgentId id = 2; id < 5; ++id) slots.assign(id, rng);
  slots.release(3);
  EXPECT_EQ(slots.slot_of(1), s);
}

TEST(PadObservation, SlotChoiceIsUniformOverFreeSlots) {
  Rng rng(41);
  std::vector<long> empty(4, 0), partial(3, 0);
  for (int i = 0; i < 10000; ++i) {
    SlotMap slots(5);
    slots.assign(1, rng);
    ++empty[*slots.slot_of(1) - 1];
  }
  EXPECT_LT(chi_square_uniform(empty), chi_square_critical_p01(3));
  for (int i = 0; i < 10000; ++i) {
    SlotMap slots(5);
    slots.assign(1, rng);
    const std::size_t taken = *slots.slot_of(1);
    slots.assign(2, rng);
    const std::size_t s = *slots.slot_of(2);
    ASSERT_NE(s, taken);
    ++partial[s - 1 - (s > taken ? 1 : 0)];
  }
  EXPECT_LT(chi_square_uniform(partial), chi_square_critical_p01(2));
}

TEST(PadObservation, ExhaustionAndOverflowRejected) {
  Rng rng(42);
  SlotMap slots(2);
  slots.assign(1, rng);
  EXPECT_THROW(slots.assign(2, rng), std::length_error);
  EXPECT_THROW(slots.assign(1, rng), std::invalid_argument);
  EXPECT_THROW(pad_observation(sample_obs({0, 1, 2}), 2, slots), std::invalid_argument);
}

TEST(PadObservation, ProbabilitiesFollowSlots) {
  Rng rng(43);
  SlotMap slots(3);
  slots.assign(6, rng);
  const auto v = pad_probs({{6, {0.25, 0.75}}}, 2, slots);
  ASSERT_EQ(v.size(), 4u);
  const std::size_t s = *slots.slot_of(6) - 1;
  EXPECT_EQ(v[2 * s], 0.25);
  EXPECT_EQ(v[2 * s + 1], 0.75);
  EXPECT_EQ(v[2 * (1 - s)], -1.0);
}

QlSpec small_ql() {
  QlSpec s;
  s.input = 6;
  s.actions = 4;
  s.embed_hidden = {5, 4};
  s.lstm = 3;
  s.head_hidden = {4};
  return s;
}

TEST(QlForward, ZeroParametersGiveZeroValues) {
  Rng rng(44);
  const QlSpec spec = small_ql();
  const ParamStore p = zeroed(init_ql_params(spec, rng));
  Tape tape;
  BoundParams b(tape, p);
  const auto out = ql_forward(b, spec, tape.constant(random_tensor({2, 6}, rng)), tape.constant(Tensor({2, 3})),
                              tape.constant(Tensor({2, 3})));
  EXPECT_EQ(out.q.value(), Tensor({2, 4}));
}

TEST(QlForward, Deterministic) {
  Rng rng(45);
  const QlSpec spec = small_ql();
  const ParamStore p = init_ql_params(spec, rng);
  const Tensor x = random_tensor({1, 6}, rng), h = random_tensor({1, 3}, rng), c = random_tensor({1, 3}, rng);
  auto run = [&] {
    Tape tape;
    BoundParams b(tape, p);
    return ql_forward(b, spec, tape.constant(x), tape.constant(h), tape.constant(c)).q.value();
  };
  EXPECT_EQ(run(), run());
}

TEST(QlForward, GradientThroughTwoSteps) {
  Rng rng(46);
  const QlSpec spec = small_ql();
  const ParamStore p = init_ql_params(spec, rng);
  const Tensor x1 = random_tensor({2, 6}, rng), x2 = random_tensor({2, 6}, rng);
  auto loss = [&](const BoundParams& b) {
    Tape& t = b.tape();
    auto s1 = ql_forward(b, spec, t.constant(x1), t.constant(Tensor({2, 3})), t.constant(Tensor({2, 3})));
    auto s2 = ql_forward(b, spec, t.constant(x2), s1.h, s1.c);
    return tensor::sum(s2.q * s2.q);
  };
  EXPECT_LE(verify::param_grad_check(loss, p).worst, 1e-4);
}

TEST(QlForward, WrongInputLengthRejected) {
  Rng rng(47);
  const QlSpec spec = small_ql();
  const ParamStore p = init_ql_params(spec, rng);
  Tape tape;
  BoundParams b(tape, p);
  EXPECT_THROW(ql_forward(b, spec, tape.constant(Tensor({1, 5})), tape.constant(Tensor({1, 3})), tape.constant(Tensor({1, 3}))),
               std::invalid_argument);
}

// ---- learner and training loop ----

TrainConfig tiny_run(Algorithm algo, std::uint64_t total = 200) {
  TrainConfig cfg;
  cfg.game.env = teammates::EnvKind::wolfpack;
  cfg.game.wolf.size = 5;
  cfg.game.wolf.horizon = 30;
  cfg.game.openness.team_limit = 3;
  cfg.game.openness.active = {3, 6};
  cfg.game.openness.waiting = {2, 4};
  cfg.game.openness.type_pool = {"wolf.H1", "wolf.H2"};
  const auto d = observation_dims(cfg.game);
  cfg.learner.algorithm = algo;
  cfg.learner.x_dim = d.x_dim;
  cfg.learner.u_dim = d.u_dim;
  cfg.learner.actions = d.actions;
  cfg.learner.widths = {{6, 5}, 4, {5}, {5}, 2, 3, 4, 3};
  cfg.learner.max_agents = 3;
  cfg.envs = 2;
  cfg.total_steps = total;
  cfg.checkpoint_interval = 50;
  cfg.seed = 3;
  return cfg;
}

TEST(Train, DefaultsMirrorPublishedSettings) {
  const TrainConfig cfg;
  EXPECT_EQ(cfg.envs, 16u);
  EXPECT_EQ(cfg.update_every, 4u);
  EXPECT_EQ(cfg.polyak, 1e-3);
  EXPECT_EQ(cfg.learner.adam.lr, 2.5e-4);
  EXPECT_EQ(cfg.learner.widths.rank, 5u);
  EXPECT_EQ(cfg.eps_fraction, 0.75);
  EXPECT_EQ(cfg.checkpoint_interval, 10000u);
}

TEST(Train, EpsilonAnnealsLinearly) {
  TrainConfig cfg;
  cfg.total_steps = 1000;
  EXPECT_EQ(cfg.epsilon(0), 1.0);
  EXPECT_NEAR(cfg.epsilon(375), 0.525, 1e-12);
  EXPECT_EQ(cfg.epsilon(750), 0.05);
  EXPECT_EQ(cfg.epsilon(999), 0.05);
}

TEST(Train, SpiWithoutTemperatureRejected) {
  TrainConfig cfg = tiny_run(Algorithm::gpl_spi);
  cfg.learner.tau = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Train, PaddedBaselineNeedsRoomForTeam) {
  TrainConfig cfg = tiny_run(Algorithm::ql);
  cfg.learner.max_agents = 2;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Train, CheckpointCountIsIntervalsPlusOne) {
  const TrainConfig cfg = tiny_run(Algorithm::gpl_q, 230);
  Learner learner(cfg.learner, 1);
  std::vector<std::uint64_t> steps;
  train(cfg, learner, [&](const TrainProgress& p, const Learner&) { steps.push_back(p.step); });
  EXPECT_EQ(steps, (std::vector<std::uint64_t>{0, 50, 100, 150, 200}));
}

TEST(Train, ZeroLearningRateLeavesParametersUnchanged) {
  TrainConfig cfg = tiny_run(Algorithm::gpl_q, 100);
  cfg.learner.adam.lr = 0.0;
  cfg.polyak = 0.0;
  Learner learner(cfg.learner, 1);
  const ParamStore value = learner.value_params(), model = learner.model_params(), target = learner.target_params();
  train(cfg, learner, {});
  EXPECT_EQ(learner.value_params(), value);
  EXPECT_EQ(learner.model_params(), model);
  EXPECT_EQ(learner.target_params(), target);
}

TEST(Train, UpdatesChangeParameters) {
  const TrainConfig cfg = tiny_run(Algorithm::gpl_q, 100);
  Learner learner(cfg.learner, 1);
  const ParamStore value = learner.value_params(), target = learner.target_params();
  train(cfg, learner, {});
  EXPECT_NE(learner.value_params(), value);
  EXPECT_NE(learner.target_params(), target);
}

TEST(Train, SameSeedIsBitIdentical) {
  for (Algorithm algo : {Algorithm::gpl_q, Algorithm::gpl_spi, Algorithm::ql, Algorithm::ql_am}) {
    const TrainConfig cfg = tiny_run(algo, 100);
    auto run = [&] {
      Learner learner(cfg.learner, 9);
      std::vector<double> trace;
      train(cfg, learner, [&](const TrainProgress& p, const Learner&) {
        trace.push_back(double(p.step));
        trace.push_back(p.nll);
        trace.push_back(p.mean_qbar);
        trace.insert(trace.end(), p.returns.begin(), p.returns.end());
      });
      return std::make_pair(trace, learner.value_params());
    };
    const auto a = run(), b = run();
    EXPECT_EQ(a.first, b.first) << algorithm_name(algo);
    EXPECT_EQ(a.second, b.second) << algorithm_name(algo);
  }
}

TEST(Learner, StoreTracksRosterDuringRollout) {
  const TrainConfig cfg = tiny_run(Algorithm::gpl_q);
  Learner learner(cfg.learner, 1);
  learner.resize(1);
  world::OpenGame game(cfg.game, 5);
  game.reset();
  envs::Observation obs = game.observe();
  learner.start_episode(0, obs);
  Rng rng(1);
  for (int t = 0; t < 300; ++t) {
    const auto q = learner.action_values(std::span(&obs, 1), t % 2 == 0);
    auto joint = game.teammate_actions();
    joint.set(kLearnerId, act(q[0], {TargetMode::q_learning, 0.3, 0.1}, rng));
    auto out = game.step(joint);
    Transition tr{joint, out.reward, out.done, nullptr, &out.events};
    envs::Observation next;
    if (!out.done) {
      next = game.observe();
      tr.next_obs = &next;
    }
    if (t % 2 == 0) learner.learn(std::span(&tr, 1));
    else learner.advance(std::span(&tr, 1));
    if (out.done) {
      game.reset();
      next = game.observe();
      learner.start_episode(0, next);
    }
    obs = next;
    std::vector<AgentId> roster;
    for (const auto& [id, _] : game.roster().members()) roster.push_back(id);
    EXPECT_EQ(learner.store(0).keys(), roster);
  }
}

TEST(Learner, LearnNeedsTrainingStep) {
  const TrainConfig cfg = tiny_run(Algorithm::gpl_q);
  Learner learner(cfg.learner, 1);
  learner.resize(1);
  world::OpenGame game(cfg.game, 5);
  game.reset();
  const auto obs = game.observe();
  learner.start_episode(0, obs);
  Transition tr{game.teammate_actions(), 0.0, true};
  EXPECT_THROW(learner.learn(std::span(&tr, 1)), std::logic_error);
  learner.action_values(std::span(&obs, 1), false);
  EXPECT_THROW(learner.learn(std::span(&tr, 1)), std::logic_error);
}

TEST(Learner, GradientIsolationBetweenModels) {
  // With terminal transitions the target is the reward alone, so the value
  // gradients must not see the agent model and vice versa.
  const TrainConfig cfg = tiny_run(Algorithm::gpl_q);
  world::OpenGame game(cfg.game, 11);
  game.reset();
  for (int t = 0; t < 8; ++t) game.step(0);
  const auto obs = game.observe();
  ASSERT_GT(obs.ids.size(), 1u);
  auto joint = game.teammate_actions();
  joint.set(kLearnerId, 2);
  auto grads = [&](bool perturb_model, bool perturb_value) {
    Learner learner(cfg.learner, 4);
    Rng rng(99);
    if (perturb_model)
      for (auto& e : learner.model_params_mut().entries()) e.value = random_tensor(e.value.shape(), rng);
    if (perturb_value)
      for (auto& e : learner.value_params_mut().entries()) e.value = random_tensor(e.value.shape(), rng);
    learner.resize(1);
    learner.start_episode(0, obs);
    learner.action_values(std::span(&obs, 1), true);
    Transition tr{joint, 1.0, true};
    learner.learn(std::span(&tr, 1));
    return std::make_pair(learner.value_grads(), learner.model_grads());
  };
  const auto base = grads(false, false);
  EXPECT_EQ(grads(true, false).first, base.first);
  EXPECT_EQ(grads(false, true).second, base.second);
}

TEST(Learner, RestoredParametersMustMatchLayout) {
  const TrainConfig cfg = tiny_run(Algorithm::gpl_q);
  Learner a(cfg.learner, 1);
  EXPECT_NO_THROW(Learner(cfg.learner, a.value_params(), a.model_params(), a.target_params(), 2));
  EXPECT_THROW(Learner(cfg.learner, a.model_params(), a.model_params(), a.target_params(), 2), std::invalid_argument);
}

TEST(Evaluate, SameSeedSameReturns) {
  const TrainConfig cfg = tiny_run(Algorithm::gpl_q);
  Learner learner(cfg.learner, 1);
  const EvalConfig ec{cfg.game, 5, 2, 7};
  const auto a = evaluate_policy(learner, ec), b = evaluate_policy(learner, ec);
  EXPECT_EQ(a.size(), 5u);
  EXPECT_EQ(a, b);
  EXPECT_EQ(evaluate_random(ec), evaluate_random(ec));
}

TEST(Evaluate, ZeroEpisodesRejected) {
  const TrainConfig cfg = tiny_run(Algorithm::gpl_q);
  EXPECT_THROW(evaluate_random({cfg.game, 0, 2, 7}), std::invalid_argument);
}

}  // namespace
}  // namespace openteam::gpl
