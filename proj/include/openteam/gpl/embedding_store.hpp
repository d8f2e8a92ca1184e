#pragma once

#include <map>
#include <span>
#include <vector>

#include "openteam/envs/observation.hpp"
#include "openteam/osbg/roster.hpp"
#include "openteam/tensor/tensor.hpp"

namespace openteam::gpl {

using osbg::AgentId;
using tensor::Tensor;

struct Hidden {
  std::vector<double> h;
  std::vector<double> c;
  bool operator==(const Hidden&) const = default;
};

// Recurrent state per agent for the value embedding, the agent-model
// embedding and the target value embedding. All three maps share one key set.
class EmbeddingStore {
 public:
  enum Map { value = 0, model = 1, target = 2 };

  explicit EmbeddingStore(std::size_t hidden = 0) : hidden_(hidden) {}

  std::size_t hidden() const { return hidden_; }
  std::size_t size() const { return maps_[0].size(); }
  bool contains(AgentId id) const { return maps_[0].count(id) != 0; }
  std::vector<AgentId> keys() const;
  const Hidden& get(Map m, AgentId id) const;

  // Removes departed rows, then inserts zero rows for arrivals.
  void preprocess(std::span<const AgentId> departures, std::span<const AgentId> arrivals);
  void clear();

  // Rows [h | c] stacked in `ids` order; throws when an id is missing.
  void gather(Map m, std::span<const AgentId> ids, Tensor& h, Tensor& c, std::size_t row0) const;
  void scatter(Map m, std::span<const AgentId> ids, const Tensor& h, const Tensor& c, std::size_t row0);

  bool operator==(const EmbeddingStore&) const = default;

 private:
  std::size_t hidden_;
  std::map<AgentId, Hidden> maps_[3];
};

std::vector<AgentId> arrival_ids(const osbg::RosterEvents& ev);

// Per-agent input rows concat(x_j, u) in observation order.
Tensor agent_inputs(const envs::Observation& obs);

}  // namespace openteam::gpl
