#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "openteam/nn/param_store.hpp"

namespace openteam::nn {

enum class Activation { none, relu, leaky_relu, tanh, sigmoid };

Activation parse_activation(std::string_view name);
std::string_view activation_name(Activation a);

// Fully connected stack. sizes = {in, h1, ..., out}; activations has one entry
// per layer (sizes.size() - 1), applied after that layer's affine map.
struct MlpSpec {
  std::vector<std::size_t> sizes;
  std::vector<Activation> activations;

  // Hidden layers use `hidden`, the last layer is linear.
  static MlpSpec with_linear_output(std::vector<std::size_t> sizes, Activation hidden);
  std::size_t in() const { return sizes.front(); }
  std::size_t out() const { return sizes.back(); }
};

// Gated recurrent cell: gates i, f, g, o from x*Wx + h*Wh + b.
struct LstmSpec {
  std::size_t input = 0;
  std::size_t hidden = 0;
};

// Message passing over a fully connected directed graph:
// edge e_jk = edge_mlp([n_j, n_k]); out_k = node_mlp([n_k, sum_{j != k} e_jk]).
struct GraphBlockSpec {
  std::size_t node_dim = 0;
  MlpSpec edge;  // edge.in() == 2 * node_dim
  MlpSpec node;  // node.in() == node_dim + edge.out()
};

struct LstmState {
  Tensor h;
  Tensor c;
};

// Weights ~ Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero.
void init_mlp(ParamStore& store, std::string_view prefix, const MlpSpec& spec, Rng& rng);
void init_lstm(ParamStore& store, std::string_view prefix, const LstmSpec& spec, Rng& rng);
void init_graph_block(ParamStore& store, std::string_view prefix, const GraphBlockSpec& spec, Rng& rng);

ParamStore init_params(std::string_view prefix, const MlpSpec& spec, Rng& rng);
ParamStore init_params(std::string_view prefix, const LstmSpec& spec, Rng& rng);
ParamStore init_params(std::string_view prefix, const GraphBlockSpec& spec, Rng& rng);

Var activate(Var x, Activation a);

// input: [n, spec.in()] -> [n, spec.out()]
Var mlp_forward(const BoundParams& params, std::string_view prefix, const MlpSpec& spec, Var input);

// input [n, in], h/c [n, hidden] -> (h', c')
std::pair<Var, Var> lstm_step(const BoundParams& params, std::string_view prefix, const LstmSpec& spec,
                              Var input, Var h, Var c);

// nodes [n, node_dim] -> [n, node.out()]
Var graph_block(const BoundParams& params, std::string_view prefix, const GraphBlockSpec& spec, Var nodes);

// Several disjoint graphs stacked row-wise; graph g owns rows [offsets[g], offsets[g+1]).
Var graph_block(const BoundParams& params, std::string_view prefix, const GraphBlockSpec& spec, Var nodes,
                const std::vector<std::size_t>& offsets);

}  // namespace openteam::nn
