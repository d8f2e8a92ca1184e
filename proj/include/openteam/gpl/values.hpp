#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string_view>
#include <vector>

#include "openteam/osbg/roster.hpp"
#include "openteam/tensor/tape.hpp"

namespace openteam::gpl {

using osbg::AgentId;
using tensor::Tensor;
using tensor::Var;
using Rng = std::mt19937_64;

// Per-agent singular utilities and rank-K pairwise factors. Row r of both
// tensors belongs to ids[r].
struct UtilityTables {
  std::vector<AgentId> ids;
  Tensor singular;  // [n, A]
  Tensor factors;   // [n, K*A], row r is a K x A matrix in row-major order
  std::size_t rank = 0;
  std::size_t actions = 0;

  std::size_t row(AgentId id) const;  // throws when absent
  // pairwise(j,k)(a,b) = sum_m F_j[m,a] F_k[m,b]
  Tensor pairwise(AgentId j, AgentId k) const;
  double pairwise(AgentId j, AgentId k, int a, int b) const;
};

// Predicted next-action distribution per teammate.
using AgentModelOutput = std::map<AgentId, std::vector<double>>;

// Sum of singular terms plus the pairwise terms over ordered pairs j != k.
double joint_q(const UtilityTables& t, const osbg::JointAgentAction& a);

// Expected joint_q over teammate actions drawn independently from `probs`, as
// a function of the learner's action.
std::vector<double> marginal_q(const UtilityTables& t, const AgentModelOutput& probs, AgentId learner);

std::vector<double> spi_policy(const std::vector<double>& qbar, double tau);

enum class TargetMode { q_learning, spi };

double td_target(double r, const std::vector<double>& next_qbar, TargetMode mode, double gamma, double tau,
                 bool terminal = false);

struct Exploration {
  TargetMode mode = TargetMode::q_learning;
  double epsilon = 0.0;  // q_learning
  double tau = 0.1;      // spi
};

// Epsilon-greedy with uniform tie-breaking, or a sample from spi_policy.
int act(const std::vector<double>& qbar, const Exploration& x, Rng& rng);

inline constexpr double kProbabilityFloor = 1e-12;

// -sum_j log probs[j](a_j) over the teammates present in `probs`.
struct NllResult {
  double loss = 0.0;
  int floored = 0;
};
NllResult agent_model_loss(const AgentModelOutput& probs, const osbg::JointAgentAction& a);

double value_loss(double joint, double y);

// Differentiable counterparts used for training.
namespace tape {

// joint[e] for groups of rows; `offsets` has one entry per group plus the end.
// actions[r] is the action taken by the agent on row r.
Var joint_q(Var singular, Var factors, std::size_t rank, std::size_t actions, const std::vector<int>& row_actions,
            const std::vector<std::size_t>& offsets);

// sum_e 0.5 (joint[e] - y[e])^2
Var value_loss(Var joint, const std::vector<double>& y);

// -sum over `rows` of log probs[row, actions[i]], with probabilities below the
// floor replaced by the floor as a constant.
Var agent_model_loss(Var probs, const std::vector<std::size_t>& rows, const std::vector<int>& actions,
                     int* floored = nullptr);

}  // namespace tape
}  // namespace openteam::gpl
