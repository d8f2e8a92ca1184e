#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "openteam/envs/lbf.hpp"
#include "openteam/envs/wolfpack.hpp"

namespace openteam::teammates {

using envs::AgentId;
using envs::Cell;
using envs::Rng;

enum class EnvKind { lbf, wolfpack };

std::string_view env_tag(EnvKind env);  // "lbf" / "wolf"

struct TypeId {
  EnvKind env = EnvKind::wolfpack;
  int heuristic = 1;

  // "wolf.H2", "lbf.H6". Throws std::invalid_argument for unknown types.
  static TypeId parse(std::string_view tag);
  std::string str() const;
  bool operator==(const TypeId&) const = default;
};

bool is_implemented(EnvKind env, int heuristic);
std::vector<std::string> all_types(EnvKind env);

// Sampled once when an agent spawns.
struct TeammateMemory {
  int waiting_radius = 0;  // wolf H7-H9: 3..5
  int window = 0;          // lbf: 3, 5 or 7 (side of the observation square)
};

TeammateMemory sample_memory(const TypeId& type, Rng& rng);

int wolf_act(const TypeId& type, const envs::WolfState& s, AgentId self, const TeammateMemory& mem, Rng& rng);
int lbf_act(const TypeId& type, const envs::LbfState& s, AgentId self, const TeammateMemory& mem, Rng& rng);

namespace detail {

// Exposed for tests.
std::optional<std::size_t> nearest_prey(const envs::WolfState& s, Cell from);
Cell greedy_destination(const envs::WolfState& s, AgentId self, std::size_t prey);
int team_aware_move(const envs::WolfState& s, AgentId self);
std::optional<std::size_t> lbf_target(const TypeId& type, const envs::LbfState& s, AgentId self, int window);

}  // namespace detail
}  // namespace openteam::teammates
