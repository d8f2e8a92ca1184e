#pragma once

#include <cstdint>

#include "openteam/nn/param_store.hpp"

namespace openteam::nn {

struct AdamConfig {
  double lr = 2.5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Per-parameter moments plus a global step counter.
struct AdamState {
  AdamConfig config;
  std::uint64_t step = 0;
  ParamStore first_moment;
  ParamStore second_moment;

  explicit AdamState(AdamConfig cfg = {}) : config(cfg) {}
};

// One bias-corrected Adam update. Parameters without an entry in `grads` are
// left untouched, and so are their moments. Throws on unknown names or shape
// mismatches before modifying anything.
void adam_step(ParamStore& params, const GradMap& grads, AdamState& state);

// target = (1 - alpha) * target + alpha * online, entry by entry.
void polyak_update(ParamStore& target, const ParamStore& online, double alpha);

}  // namespace openteam::nn
