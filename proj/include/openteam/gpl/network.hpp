#pragma once

#include <vector>

#include "openteam/gpl/values.hpp"
#include "openteam/nn/layers.hpp"

namespace openteam::gpl {

using nn::BoundParams;
using nn::ParamStore;

struct GplSpec {
  std::size_t input = 0;  // per-agent row width: |x| + |u|
  std::size_t actions = 0;
  std::size_t rank = 5;
  std::vector<std::size_t> embed_hidden{100, 100};
  std::size_t lstm = 100;
  std::vector<std::size_t> beta_hidden{70, 60};
  std::vector<std::size_t> delta_hidden{70, 60};
  std::size_t edge_out = 30;
  std::size_t node_out = 70;
  std::size_t eta_hidden = 20;

  void validate() const;
  nn::MlpSpec embed() const;
  nn::LstmSpec recurrent() const;
  nn::MlpSpec beta() const;
  nn::MlpSpec delta() const;
  nn::GraphBlockSpec graph() const;
  nn::MlpSpec eta() const;
};

// Parameter prefixes. The value pathway is "value.*", "beta", "delta"; the
// agent model is "model.*" and "eta".
inline constexpr const char* kValuePrefix = "value";
inline constexpr const char* kModelPrefix = "model";

ParamStore init_value_params(const GplSpec& spec, Rng& rng);
ParamStore init_model_params(const GplSpec& spec, Rng& rng);
ParamStore init_gpl_params(const GplSpec& spec, Rng& rng);
// Copy of the entries under the value pathway (what the target network holds).
ParamStore value_subset(const ParamStore& params);

// Rows of several environments stacked; group g owns rows [offsets[g], offsets[g+1])
// and its first row is the learner.
struct Groups {
  std::vector<std::size_t> offsets{0};
  std::vector<AgentId> ids;

  std::size_t count() const { return offsets.size() - 1; }
  std::size_t rows() const { return offsets.back(); }
  void add(std::span<const AgentId> group_ids);
  std::vector<std::size_t> learner_rows() const;  // per row: the learner row of its group
  std::vector<std::size_t> group_of() const;
};

struct Recurrent {
  Var h;
  Var c;
};

// Two FC layers then an LSTM step; `which` is kValuePrefix or kModelPrefix.
Recurrent embed_types(const BoundParams& p, const GplSpec& spec, const char* which, Var input, Var h, Var c);

struct UtilityVars {
  Var singular;  // [n, A]
  Var factors;   // [n, K*A]
};
// MLP_beta and MLP_delta on concat(theta_j, theta_learner).
UtilityVars compute_utilities(const BoundParams& p, const GplSpec& spec, Var embeddings, const Groups& g);

// Softmax(MLP_eta(graph block)) for every row, learner rows included.
Var teammate_probs(const BoundParams& p, const GplSpec& spec, Var embeddings, const Groups& g);

// Plain views of one group.
UtilityTables tables_of(const UtilityVars& u, const GplSpec& spec, const Groups& g, std::size_t group);
AgentModelOutput probs_of(const Tensor& probs, const Groups& g, std::size_t group);

}  // namespace openteam::gpl
