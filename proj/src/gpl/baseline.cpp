#include "openteam/gpl/baseline.hpp"

#include <stdexcept>
#include <string>

namespace openteam::gpl {

SlotMap::SlotMap(std::size_t max_agents) : max_agents_(max_agents) {
  if (max_agents == 0) throw std::invalid_argument("slot map needs room for the learner");
}

void SlotMap::assign(AgentId id, Rng& rng) {
  if (slots_.count(id)) throw std::invalid_argument("slot map: agent " + std::to_string(id) + " already has a slot");
  std::vector<bool> used(max_agents_, false);
  for (const auto& [_, s] : slots_) used[s] = true;
  std::vector<std::size_t> free;
  for (std::size_t s = 1; s < max_agents_; ++s)
    if (!used[s]) free.push_back(s);
  if (free.empty()) throw std::length_error("slot map: no free slot for agent " + std::to_string(id));
  slots_[id] = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
}

void SlotMap::release(AgentId id) { slots_.erase(id); }

std::optional<std::size_t> SlotMap::slot_of(AgentId id) const {
  auto it = slots_.find(id);
  if (it == slots_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> pad_observation(const envs::Observation& obs, std::size_t max_agents, const SlotMap& slots) {
  if (obs.ids.empty() || obs.ids.front() != osbg::kLearnerId)
    throw std::invalid_argument("pad_observation: learner row missing");
  if (obs.ids.size() > max_agents) throw std::invalid_argument("pad_observation: more agents than slots");
  const std::size_t d = obs.agent_dim();
  std::vector<double> out(max_agents * d + obs.u.size(), envs::kSentinel);
  std::copy(obs.x[0].begin(), obs.x[0].end(), out.begin());
  for (std::size_t r = 1; r < obs.ids.size(); ++r) {
    auto s = slots.slot_of(obs.ids[r]);
    if (!s) throw std::invalid_argument("pad_observation: agent " + std::to_string(obs.ids[r]) + " has no slot");
    std::copy(obs.x[r].begin(), obs.x[r].end(), out.begin() + long(*s * d));
  }
  std::copy(obs.u.begin(), obs.u.end(), out.begin() + long(max_agents * d));
  return out;
}

std::vector<double> pad_probs(const AgentModelOutput& probs, std::size_t actions, const SlotMap& slots) {
  const std::size_t m = slots.max_agents();
  std::vector<double> out((m - 1) * actions, envs::kSentinel);
  for (const auto& [id, p] : probs) {
    auto s = slots.slot_of(id);
    if (!s) throw std::invalid_argument("pad_probs: agent " + std::to_string(id) + " has no slot");
    std::copy(p.begin(), p.end(), out.begin() + long((*s - 1) * actions));
  }
  return out;
}

void QlSpec::validate() const {
  if (input == 0 || actions < 2 || lstm == 0 || embed_hidden.empty())
    throw std::invalid_argument("ql: invalid network spec");
}

nn::MlpSpec QlSpec::embed() const {
  std::vector<std::size_t> sizes{input};
  sizes.insert(sizes.end(), embed_hidden.begin(), embed_hidden.end());
  nn::MlpSpec s{sizes, {}};
  s.activations.assign(sizes.size() - 1, nn::Activation::relu);
  return s;
}

nn::LstmSpec QlSpec::recurrent() const { return {embed_hidden.back(), lstm}; }

nn::MlpSpec QlSpec::head() const {
  std::vector<std::size_t> sizes{lstm};
  sizes.insert(sizes.end(), head_hidden.begin(), head_hidden.end());
  sizes.push_back(actions);
  return nn::MlpSpec::with_linear_output(sizes, nn::Activation::relu);
}

ParamStore init_ql_params(const QlSpec& spec, Rng& rng) {
  spec.validate();
  ParamStore s;
  nn::init_mlp(s, "ql.embed", spec.embed(), rng);
  nn::init_lstm(s, "ql.lstm", spec.recurrent(), rng);
  nn::init_mlp(s, "ql.head", spec.head(), rng);
  return s;
}

QlOutput ql_forward(const BoundParams& p, const QlSpec& spec, Var input, Var h, Var c) {
  if (input.shape().size() != 2 || input.shape()[1] != spec.input)
    throw std::invalid_argument("ql_forward: input must have width " + std::to_string(spec.input));
  Var e = nn::mlp_forward(p, "ql.embed", spec.embed(), input);
  auto [h2, c2] = nn::lstm_step(p, "ql.lstm", spec.recurrent(), e, h, c);
  return {nn::mlp_forward(p, "ql.head", spec.head(), h2), h2, c2};
}

}  // namespace openteam::gpl
