#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "openteam/gpl/learner.hpp"
#include "openteam/world/open_game.hpp"

namespace openteam::gpl {

struct ObservationDims {
  std::size_t x_dim = 0;
  std::size_t u_dim = 0;
  std::size_t actions = 0;
};
ObservationDims observation_dims(const world::GameConfig& game);

struct TrainConfig {
  world::GameConfig game;
  LearnerConfig learner;
  std::size_t envs = 16;
  std::uint64_t total_steps = 200000;  // environment transitions over all envs
  std::uint64_t checkpoint_interval = 10000;
  double eps_start = 1.0;
  double eps_end = 0.05;
  double eps_fraction = 0.75;
  std::size_t update_every = 4;
  double polyak = 1e-3;
  std::uint64_t seed = 1;

  void validate() const;
  double epsilon(std::uint64_t step) const;
};

struct TrainProgress {
  std::uint64_t step = 0;
  std::vector<double> returns;  // episodes finished since the previous checkpoint
  double nll = 0.0;             // mean per teammate prediction over the window
  double mean_qbar = 0.0;       // mean greedy action value over the window
  int floored = 0;
  std::size_t nll_terms = 0;
  std::size_t q_terms = 0;
};

using CheckpointFn = std::function<void(const TrainProgress&, const Learner&)>;

// Synchronous training over cfg.envs environments. `on_checkpoint` runs at
// step 0 and whenever the step count passes a multiple of the interval.
void train(const TrainConfig& cfg, Learner& learner, const CheckpointFn& on_checkpoint);

struct EvalConfig {
  world::GameConfig game;
  std::size_t episodes = 100;
  std::size_t envs = 16;
  std::uint64_t seed = 1;
};

// Returns of `episodes` complete episodes under the greedy policy (SPI
// learners sample from their Boltzmann policy).
std::vector<double> evaluate_policy(Learner& learner, const EvalConfig& cfg);
// Same protocol with a uniformly random learner.
std::vector<double> evaluate_random(const EvalConfig& cfg);

}  // namespace openteam::gpl
