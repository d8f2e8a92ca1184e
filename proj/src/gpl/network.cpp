#include "openteam/gpl/network.hpp"

#include <stdexcept>
#include <string>

namespace openteam::gpl {
namespace {

using nn::Activation;

std::vector<std::size_t> chain(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out) {
  std::vector<std::size_t> s{in};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(out);
  return s;
}

std::string name(const char* which, const char* part) { return std::string(which) + "." + part; }

}  // namespace

void GplSpec::validate() const {
  if (input == 0) throw std::invalid_argument("gpl: input width must be positive");
  if (actions < 2) throw std::invalid_argument("gpl: need at least two actions");
  if (rank == 0) throw std::invalid_argument("gpl: rank must be positive");
  if (embed_hidden.empty()) throw std::invalid_argument("gpl: embedding needs at least one layer");
  for (std::size_t w : embed_hidden)
    if (w == 0) throw std::invalid_argument("gpl: zero layer width");
  if (lstm == 0 || edge_out == 0 || node_out == 0 || eta_hidden == 0)
    throw std::invalid_argument("gpl: zero layer width");
}

nn::MlpSpec GplSpec::embed() const {
  nn::MlpSpec s{chain(input, {embed_hidden.begin(), embed_hidden.end() - 1}, embed_hidden.back()), {}};
  s.activations.assign(s.sizes.size() - 1, Activation::relu);
  return s;
}

nn::LstmSpec GplSpec::recurrent() const { return {embed_hidden.back(), lstm}; }

nn::MlpSpec GplSpec::beta() const {
  return nn::MlpSpec::with_linear_output(chain(2 * lstm, beta_hidden, actions), Activation::relu);
}

nn::MlpSpec GplSpec::delta() const {
  return nn::MlpSpec::with_linear_output(chain(2 * lstm, delta_hidden, rank * actions), Activation::relu);
}

nn::GraphBlockSpec GplSpec::graph() const {
  return {lstm, nn::MlpSpec::with_linear_output({2 * lstm, edge_out}, Activation::leaky_relu),
          nn::MlpSpec::with_linear_output({lstm + edge_out, node_out}, Activation::leaky_relu)};
}

nn::MlpSpec GplSpec::eta() const {
  return nn::MlpSpec::with_linear_output({node_out, eta_hidden, actions}, Activation::leaky_relu);
}

ParamStore init_value_params(const GplSpec& spec, Rng& rng) {
  spec.validate();
  ParamStore s;
  nn::init_mlp(s, name(kValuePrefix, "embed"), spec.embed(), rng);
  nn::init_lstm(s, name(kValuePrefix, "lstm"), spec.recurrent(), rng);
  nn::init_mlp(s, "beta", spec.beta(), rng);
  nn::init_mlp(s, "delta", spec.delta(), rng);
  return s;
}

ParamStore init_model_params(const GplSpec& spec, Rng& rng) {
  spec.validate();
  ParamStore s;
  nn::init_mlp(s, name(kModelPrefix, "embed"), spec.embed(), rng);
  nn::init_lstm(s, name(kModelPrefix, "lstm"), spec.recurrent(), rng);
  nn::init_graph_block(s, name(kModelPrefix, "graph"), spec.graph(), rng);
  nn::init_mlp(s, "eta", spec.eta(), rng);
  return s;
}

ParamStore init_gpl_params(const GplSpec& spec, Rng& rng) {
  ParamStore s = init_value_params(spec, rng);
  s.merge(init_model_params(spec, rng));
  return s;
}

ParamStore value_subset(const ParamStore& params) {
  ParamStore out;
  for (const auto& e : params.entries())
    if (e.name.starts_with("value.") || e.name.starts_with("beta.") || e.name.starts_with("delta."))
      out.add(e.name, e.value);
  return out;
}

void Groups::add(std::span<const AgentId> group_ids) {
  if (group_ids.empty()) throw std::invalid_argument("groups: empty group");
  ids.insert(ids.end(), group_ids.begin(), group_ids.end());
  offsets.push_back(ids.size());
}

std::vector<std::size_t> Groups::learner_rows() const {
  std::vector<std::size_t> out(rows());
  for (std::size_t g = 0; g < count(); ++g)
    for (std::size_t r = offsets[g]; r < offsets[g + 1]; ++r) out[r] = offsets[g];
  return out;
}

std::vector<std::size_t> Groups::group_of() const {
  std::vector<std::size_t> out(rows());
  for (std::size_t g = 0; g < count(); ++g)
    for (std::size_t r = offsets[g]; r < offsets[g + 1]; ++r) out[r] = g;
  return out;
}

Recurrent embed_types(const BoundParams& p, const GplSpec& spec, const char* which, Var input, Var h, Var c) {
  if (input.shape().size() != 2 || input.shape()[1] != spec.input)
    throw std::invalid_argument("embed_types: input rows must have width " + std::to_string(spec.input));
  if (h.shape()[0] != input.shape()[0])
    throw std::invalid_argument("embed_types: batch and recurrent state are misaligned");
  Var e = nn::mlp_forward(p, name(which, "embed"), spec.embed(), input);
  auto [h2, c2] = nn::lstm_step(p, name(which, "lstm"), spec.recurrent(), e, h, c);
  return {h2, c2};
}

UtilityVars compute_utilities(const BoundParams& p, const GplSpec& spec, Var embeddings, const Groups& g) {
  Var pair = tensor::concat_last({embeddings, tensor::select_rows(embeddings, g.learner_rows())});
  return {nn::mlp_forward(p, "beta", spec.beta(), pair), nn::mlp_forward(p, "delta", spec.delta(), pair)};
}

Var teammate_probs(const BoundParams& p, const GplSpec& spec, Var embeddings, const Groups& g) {
  Var nodes = nn::graph_block(p, name(kModelPrefix, "graph"), spec.graph(), embeddings, g.offsets);
  return tensor::softmax(nn::mlp_forward(p, "eta", spec.eta(), nodes));
}

UtilityTables tables_of(const UtilityVars& u, const GplSpec& spec, const Groups& g, std::size_t group) {
  const std::size_t r0 = g.offsets[group], n = g.offsets[group + 1] - r0;
  const std::size_t A = spec.actions, KA = spec.rank * A;
  UtilityTables t;
  t.ids.assign(g.ids.begin() + long(r0), g.ids.begin() + long(r0 + n));
  t.rank = spec.rank;
  t.actions = A;
  const double* s = u.singular.value().ptr() + r0 * A;
  const double* f = u.factors.value().ptr() + r0 * KA;
  t.singular = Tensor({n, A}, std::vector<double>(s, s + n * A));
  t.factors = Tensor({n, KA}, std::vector<double>(f, f + n * KA));
  return t;
}

AgentModelOutput probs_of(const Tensor& probs, const Groups& g, std::size_t group) {
  const std::size_t A = probs.shape()[1];
  AgentModelOutput out;
  for (std::size_t r = g.offsets[group] + 1; r < g.offsets[group + 1]; ++r)
    out[g.ids[r]] = std::vector<double>(probs.ptr() + r * A, probs.ptr() + (r + 1) * A);
  return out;
}

}  // namespace openteam::gpl
