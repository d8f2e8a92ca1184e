#include <charconv>
#include <stdexcept>

#include "openteam/teammates/policies.hpp"

namespace openteam::teammates {

std::string_view env_tag(EnvKind env) { return env == EnvKind::lbf ? "lbf" : "wolf"; }

bool is_implemented(EnvKind env, int h) {
  if (env == EnvKind::wolfpack) return (h >= 1 && h <= 4) || (h >= 7 && h <= 9);
  return (h >= 1 && h <= 4) || (h >= 6 && h <= 9);
}

std::vector<std::string> all_types(EnvKind env) {
  std::vector<std::string> out;
  for (int h = 1; h <= 9; ++h)
    if (is_implemented(env, h)) out.push_back(TypeId{env, h}.str());
  return out;
}

TypeId TypeId::parse(std::string_view tag) {
  const auto dot = tag.find(".H");
  if (dot == std::string_view::npos) throw std::invalid_argument("unknown teammate type '" + std::string(tag) + "'");
  const std::string_view env = tag.substr(0, dot);
  TypeId t;
  if (env == "wolf") {
    t.env = EnvKind::wolfpack;
  } else if (env == "lbf") {
    t.env = EnvKind::lbf;
  } else {
    throw std::invalid_argument("unknown teammate type '" + std::string(tag) + "'");
  }
  const std::string_view num = tag.substr(dot + 2);
  auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), t.heuristic);
  if (ec != std::errc() || ptr != num.data() + num.size() || !is_implemented(t.env, t.heuristic))
    throw std::invalid_argument("unknown teammate type '" + std::string(tag) + "'");
  return t;
}

std::string TypeId::str() const { return std::string(env_tag(env)) + ".H" + std::to_string(heuristic); }

TeammateMemory sample_memory(const TypeId& type, Rng& rng) {
  TeammateMemory m;
  if (type.env == EnvKind::wolfpack) {
    if (type.heuristic >= 7) m.waiting_radius = std::uniform_int_distribution<int>(3, 5)(rng);
  } else {
    m.window = 3 + 2 * std::uniform_int_distribution<int>(0, 2)(rng);
  }
  return m;
}

}  // namespace openteam::teammates
