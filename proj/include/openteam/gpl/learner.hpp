#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "openteam/gpl/baseline.hpp"
#include "openteam/gpl/embedding_store.hpp"
#include "openteam/gpl/network.hpp"
#include "openteam/nn/optim.hpp"

namespace openteam::gpl {

enum class Algorithm { gpl_q, gpl_spi, ql, ql_am };

Algorithm parse_algorithm(std::string_view s);  // "GPL-Q", "GPL-SPI", "QL", "QL-AM"
std::string_view algorithm_name(Algorithm a);
bool is_gpl(Algorithm a);
bool has_agent_model(Algorithm a);

struct NetWidths {
  std::vector<std::size_t> embed_hidden{100, 100};
  std::size_t lstm = 100;
  std::vector<std::size_t> beta_hidden{70, 60};
  std::vector<std::size_t> delta_hidden{70, 60};
  std::size_t rank = 5;
  std::size_t edge_out = 30;
  std::size_t node_out = 70;
  std::size_t eta_hidden = 20;
};

struct LearnerConfig {
  Algorithm algorithm = Algorithm::gpl_q;
  NetWidths widths;
  std::size_t x_dim = 0;
  std::size_t u_dim = 0;
  std::size_t actions = 0;
  std::size_t max_agents = 5;  // padded baselines only
  double gamma = 0.99;
  double tau = 0.1;
  nn::AdamConfig adam;

  void validate() const;
  GplSpec gpl_spec() const;
  QlSpec ql_spec() const;
  TargetMode target_mode() const;
};

struct Transition {
  osbg::JointAgentAction joint;  // every agent present at t, learner included
  double reward = 0.0;
  bool done = false;
  const envs::Observation* next_obs = nullptr;   // unused when done
  const osbg::RosterEvents* events = nullptr;    // unused when done
};

struct LearnStats {
  double value_loss = 0.0;
  double nll = 0.0;
  std::size_t nll_terms = 0;
  int floored = 0;
};

// Online value pathway, its target copy and (for GPL and QL-AM) the agent
// model, plus the per-environment recurrent bookkeeping.
class Learner {
 public:
  Learner(LearnerConfig cfg, std::uint64_t seed);
  Learner(LearnerConfig cfg, ParamStore value, ParamStore model, ParamStore target, std::uint64_t seed);
  ~Learner();
  Learner(const Learner&) = delete;
  Learner& operator=(const Learner&) = delete;

  const LearnerConfig& config() const { return cfg_; }

  void resize(std::size_t envs);
  std::size_t envs() const { return stores_.size(); }
  // Clears env's recurrent state; every agent in `obs` starts from zero.
  void start_episode(std::size_t env, const envs::Observation& obs);

  // Action values for each env's current observation. With `train` the tape
  // is kept for the following learn() call.
  std::vector<std::vector<double>> action_values(std::span<const envs::Observation> obs, bool train);
  // Losses on the pending step, gradients accumulated; commits recurrent state
  // and applies roster events for envs that are not done.
  LearnStats learn(std::span<const Transition> tr);
  // Commits recurrent state and roster events without learning.
  void advance(std::span<const Transition> tr);

  // Adam step on the accumulated gradients, which are then cleared.
  bool apply_update();
  void polyak(double alpha);

  const ParamStore& value_params() const { return value_; }
  const ParamStore& model_params() const { return model_; }
  const ParamStore& target_params() const { return target_; }
  ParamStore& value_params_mut() { return value_; }
  ParamStore& model_params_mut() { return model_; }
  const nn::GradMap& value_grads() const { return grads_value_; }
  const nn::GradMap& model_grads() const { return grads_model_; }

  const EmbeddingStore& store(std::size_t env) const { return stores_.at(env); }
  const SlotMap& slots(std::size_t env) const { return slots_.at(env); }
  // Per env, from the latest action_values() call (GPL only for tables).
  const UtilityTables& last_tables(std::size_t env) const;
  const AgentModelOutput& last_probs(std::size_t env) const;

 private:
  struct Pending;

  Groups groups_for(std::span<const envs::Observation> obs) const;
  std::vector<std::vector<double>> target_values(std::span<const envs::Observation* const> obs,
                                                 std::span<const std::size_t> envs);
  void commit(std::span<const Transition> tr);

  LearnerConfig cfg_;
  GplSpec gpl_;
  QlSpec ql_;
  Rng rng_;
  ParamStore value_;
  ParamStore model_;
  ParamStore target_;
  nn::AdamState adam_value_;
  nn::AdamState adam_model_;
  nn::GradMap grads_value_;
  nn::GradMap grads_model_;
  std::vector<EmbeddingStore> stores_;
  std::vector<SlotMap> slots_;
  std::vector<UtilityTables> tables_;
  std::vector<AgentModelOutput> probs_;
  std::unique_ptr<Pending> pending_;
};

}  // namespace openteam::gpl
