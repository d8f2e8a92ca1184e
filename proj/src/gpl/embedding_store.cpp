#include "openteam/gpl/embedding_store.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace openteam::gpl {

std::vector<AgentId> EmbeddingStore::keys() const {
  std::vector<AgentId> out;
  for (const auto& [id, _] : maps_[0]) out.push_back(id);
  return out;
}

const Hidden& EmbeddingStore::get(Map m, AgentId id) const {
  auto it = maps_[m].find(id);
  if (it == maps_[m].end()) throw std::out_of_range("embedding store has no agent " + std::to_string(id));
  return it->second;
}

void EmbeddingStore::preprocess(std::span<const AgentId> departures, std::span<const AgentId> arrivals) {
  for (AgentId id : arrivals)
    if (contains(id) && std::find(departures.begin(), departures.end(), id) == departures.end())
      throw std::invalid_argument("embedding store: arrival " + std::to_string(id) + " is already present");
  for (AgentId id : departures)
    for (auto& m : maps_) m.erase(id);
  for (AgentId id : arrivals)
    for (auto& m : maps_) m[id] = Hidden{std::vector<double>(hidden_, 0.0), std::vector<double>(hidden_, 0.0)};
}

void EmbeddingStore::clear() {
  for (auto& m : maps_) m.clear();
}

void EmbeddingStore::gather(Map m, std::span<const AgentId> ids, Tensor& h, Tensor& c, std::size_t row0) const {
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const Hidden& s = get(m, ids[r]);
    std::copy(s.h.begin(), s.h.end(), h.ptr() + (row0 + r) * hidden_);
    std::copy(s.c.begin(), s.c.end(), c.ptr() + (row0 + r) * hidden_);
  }
}

void EmbeddingStore::scatter(Map m, std::span<const AgentId> ids, const Tensor& h, const Tensor& c,
                             std::size_t row0) {
  for (std::size_t r = 0; r < ids.size(); ++r) {
    auto it = maps_[m].find(ids[r]);
    if (it == maps_[m].end()) throw std::out_of_range("embedding store has no agent " + std::to_string(ids[r]));
    const double* hp = h.ptr() + (row0 + r) * hidden_;
    const double* cp = c.ptr() + (row0 + r) * hidden_;
    it->second.h.assign(hp, hp + hidden_);
    it->second.c.assign(cp, cp + hidden_);
  }
}

std::vector<AgentId> arrival_ids(const osbg::RosterEvents& ev) {
  std::vector<AgentId> out;
  for (const auto& a : ev.arrivals) out.push_back(a.id);
  return out;
}

Tensor agent_inputs(const envs::Observation& obs) {
  const std::size_t n = obs.ids.size(), xd = obs.agent_dim(), ud = obs.u.size();
  Tensor t({n, xd + ud});
  for (std::size_t r = 0; r < n; ++r) {
    std::copy(obs.x[r].begin(), obs.x[r].end(), t.ptr() + r * (xd + ud));
    std::copy(obs.u.begin(), obs.u.end(), t.ptr() + r * (xd + ud) + xd);
  }
  return t;
}

}  // namespace openteam::gpl
