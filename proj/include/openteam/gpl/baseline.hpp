#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "openteam/envs/observation.hpp"
#include "openteam/gpl/network.hpp"

namespace openteam::gpl {

// Teammate slots 1..max_agents-1; slot 0 is the learner's. A slot is drawn
// uniformly from the free ones on arrival and held until departure.
class SlotMap {
 public:
  explicit SlotMap(std::size_t max_agents = 1);

  std::size_t max_agents() const { return max_agents_; }
  void assign(AgentId id, Rng& rng);  // throws when full or already assigned
  void release(AgentId id);
  void clear() { slots_.clear(); }
  std::optional<std::size_t> slot_of(AgentId id) const;
  const std::map<AgentId, std::size_t>& slots() const { return slots_; }

 private:
  std::size_t max_agents_;
  std::map<AgentId, std::size_t> slots_;
};

// [x_learner | x_slot1 | ... | x_slot(max-1) | u], absent slots filled with -1.
std::vector<double> pad_observation(const envs::Observation& obs, std::size_t max_agents, const SlotMap& slots);

// Teammate probabilities per slot (slots 1..max-1), absent slots filled with -1.
std::vector<double> pad_probs(const AgentModelOutput& probs, std::size_t actions, const SlotMap& slots);

struct QlSpec {
  std::size_t input = 0;  // padded width, plus the padded probabilities for QL-AM
  std::size_t actions = 0;
  std::vector<std::size_t> embed_hidden{100, 100};
  std::size_t lstm = 100;
  std::vector<std::size_t> head_hidden{70, 60};

  void validate() const;
  nn::MlpSpec embed() const;
  nn::LstmSpec recurrent() const;
  nn::MlpSpec head() const;
};

ParamStore init_ql_params(const QlSpec& spec, Rng& rng);

struct QlOutput {
  Var q;  // [n, A]
  Var h;
  Var c;
};
// input [n, spec.input] with recurrent state [n, lstm].
QlOutput ql_forward(const BoundParams& p, const QlSpec& spec, Var input, Var h, Var c);

}  // namespace openteam::gpl
