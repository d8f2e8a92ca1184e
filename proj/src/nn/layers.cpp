#include "openteam/nn/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace openteam::nn {

namespace {

std::string join(std::string_view prefix, std::string_view leaf) {
  std::string s(prefix);
  s += '.';
  s += leaf;
  return s;
}

Tensor uniform_weights(std::size_t rows, std::size_t cols, Rng& rng) {
  const double bound = 1.0 / std::sqrt(double(rows));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Tensor w({rows, cols});
  for (double& v : w.data()) v = dist(rng);
  return w;
}

void validate(const MlpSpec& spec) {
  if (spec.sizes.size() < 2) throw std::invalid_argument("mlp spec needs at least an input and an output size");
  if (spec.activations.size() != spec.sizes.size() - 1)
    throw std::invalid_argument("mlp spec needs one activation per layer");
  for (std::size_t s : spec.sizes)
    if (s == 0) throw std::invalid_argument("mlp layer sizes must be positive");
}

void expect_width(std::string_view what, const Var& v, std::size_t width) {
  if (v.shape().size() != 2 || v.shape()[1] != width)
    throw std::invalid_argument(std::string(what) + ": expected [n," + std::to_string(width) + "] input, got " +
                                tensor::shape_str(v.shape()));
}

}  // namespace

Activation parse_activation(std::string_view name) {
  if (name == "none" || name == "linear") return Activation::none;
  if (name == "relu") return Activation::relu;
  if (name == "leaky_relu") return Activation::leaky_relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "sigmoid") return Activation::sigmoid;
  throw std::invalid_argument("unknown activation: " + std::string(name));
}

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::none: return "none";
    case Activation::relu: return "relu";
    case Activation::leaky_relu: return "leaky_relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  return "none";
}

MlpSpec MlpSpec::with_linear_output(std::vector<std::size_t> sizes, Activation hidden) {
  MlpSpec spec;
  spec.sizes = std::move(sizes);
  if (spec.sizes.size() >= 2) {
    spec.activations.assign(spec.sizes.size() - 1, hidden);
    spec.activations.back() = Activation::none;
  }
  return spec;
}

void init_mlp(ParamStore& store, std::string_view prefix, const MlpSpec& spec, Rng& rng) {
  validate(spec);
  for (std::size_t l = 0; l + 1 < spec.sizes.size(); ++l) {
    const std::string layer = join(prefix, std::to_string(l));
    store.add(join(layer, "w"), uniform_weights(spec.sizes[l], spec.sizes[l + 1], rng));
    store.add(join(layer, "b"), Tensor({spec.sizes[l + 1]}));
  }
}

void init_lstm(ParamStore& store, std::string_view prefix, const LstmSpec& spec, Rng& rng) {
  if (spec.input == 0 || spec.hidden == 0) throw std::invalid_argument("lstm sizes must be positive");
  store.add(join(prefix, "wx"), uniform_weights(spec.input, 4 * spec.hidden, rng));
  store.add(join(prefix, "wh"), uniform_weights(spec.hidden, 4 * spec.hidden, rng));
  store.add(join(prefix, "b"), Tensor({4 * spec.hidden}));
}

void init_graph_block(ParamStore& store, std::string_view prefix, const GraphBlockSpec& spec, Rng& rng) {
  if (spec.node_dim == 0) throw std::invalid_argument("graph block node_dim must be positive");
  validate(spec.edge);
  validate(spec.node);
  if (spec.edge.in() != 2 * spec.node_dim)
    throw std::invalid_argument("graph block edge net must take 2 * node_dim inputs");
  if (spec.node.in() != spec.node_dim + spec.edge.out())
    throw std::invalid_argument("graph block node net must take node_dim + edge width inputs");
  init_mlp(store, join(prefix, "edge"), spec.edge, rng);
  init_mlp(store, join(prefix, "node"), spec.node, rng);
}

ParamStore init_params(std::string_view prefix, const MlpSpec& spec, Rng& rng) {
  ParamStore s;
  init_mlp(s, prefix, spec, rng);
  return s;
}

ParamStore init_params(std::string_view prefix, const LstmSpec& spec, Rng& rng) {
  ParamStore s;
  init_lstm(s, prefix, spec, rng);
  return s;
}

ParamStore init_params(std::string_view prefix, const GraphBlockSpec& spec, Rng& rng) {
  ParamStore s;
  init_graph_block(s, prefix, spec, rng);
  return s;
}

Var activate(Var x, Activation a) {
  switch (a) {
    case Activation::none: return x;
    case Activation::relu: return tensor::relu(x);
    case Activation::leaky_relu: return tensor::leaky_relu(x);
    case Activation::tanh: return tensor::tanh(x);
    case Activation::sigmoid: return tensor::sigmoid(x);
  }
  return x;
}

Var mlp_forward(const BoundParams& params, std::string_view prefix, const MlpSpec& spec, Var input) {
  validate(spec);
  expect_width("mlp_forward", input, spec.in());
  Var x = input;
  for (std::size_t l = 0; l + 1 < spec.sizes.size(); ++l) {
    const std::string layer = join(prefix, std::to_string(l));
    x = tensor::matmul(x, params[join(layer, "w")]) + params[join(layer, "b")];
    x = activate(x, spec.activations[l]);
  }
  return x;
}

std::pair<Var, Var> lstm_step(const BoundParams& params, std::string_view prefix, const LstmSpec& spec,
                              Var input, Var h, Var c) {
  expect_width("lstm_step input", input, spec.input);
  expect_width("lstm_step h", h, spec.hidden);
  expect_width("lstm_step c", c, spec.hidden);
  if (h.shape()[0] != input.shape()[0] || c.shape()[0] != input.shape()[0])
    throw std::invalid_argument("lstm_step: batch sizes of input and state differ");
  const std::size_t H = spec.hidden;
  Var gates = tensor::matmul(input, params[join(prefix, "wx")]) + tensor::matmul(h, params[join(prefix, "wh")]) +
              params[join(prefix, "b")];
  Var i = tensor::sigmoid(tensor::slice_last(gates, 0, H));
  Var f = tensor::sigmoid(tensor::slice_last(gates, H, H));
  Var g = tensor::tanh(tensor::slice_last(gates, 2 * H, H));
  Var o = tensor::sigmoid(tensor::slice_last(gates, 3 * H, H));
  Var c_next = f * c + i * g;
  Var h_next = o * tensor::tanh(c_next);
  return {h_next, c_next};
}

Var graph_block(const BoundParams& params, std::string_view prefix, const GraphBlockSpec& spec, Var nodes) {
  expect_width("graph_block", nodes, spec.node_dim);
  return graph_block(params, prefix, spec, nodes, {0, nodes.shape()[0]});
}

Var graph_block(const BoundParams& params, std::string_view prefix, const GraphBlockSpec& spec, Var nodes,
                const std::vector<std::size_t>& offsets) {
  expect_width("graph_block", nodes, spec.node_dim);
  const std::size_t n = nodes.shape()[0];
  if (offsets.size() < 2 || offsets.front() != 0 || offsets.back() != n)
    throw std::invalid_argument("graph_block: offsets must start at 0 and end at the row count");
  std::vector<std::size_t> senders, receivers;
  for (std::size_t g = 0; g + 1 < offsets.size(); ++g) {
    if (offsets[g + 1] < offsets[g]) throw std::invalid_argument("graph_block: offsets must be nondecreasing");
    for (std::size_t k = offsets[g]; k < offsets[g + 1]; ++k)
      for (std::size_t j = offsets[g]; j < offsets[g + 1]; ++j)
        if (j != k) {
          senders.push_back(j);
          receivers.push_back(k);
        }
  }
  Var aggregate;
  if (senders.empty()) {
    aggregate = params.tape().constant(Tensor({n, spec.edge.out()}));
  } else {
    Var pair = tensor::concat_last({tensor::select_rows(nodes, senders), tensor::select_rows(nodes, receivers)});
    Var edges = mlp_forward(params, join(prefix, "edge"), spec.edge, pair);
    aggregate = tensor::segment_sum(edges, std::move(receivers), n);
  }
  return mlp_forward(params, join(prefix, "node"), spec.node, tensor::concat_last({nodes, aggregate}));
}

}  // namespace openteam::nn
