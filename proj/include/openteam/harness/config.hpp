#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "openteam/gpl/train.hpp"

namespace openteam::harness {

using Json = nlohmann::json;

// Thrown for malformed or inconsistent configuration.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  gpl::TrainConfig train;  // train.game carries the training openness process
  osbg::OpennessConfig eval_openness;
  std::string output_dir = "runs/default";

  // Parses and validates; unknown keys are errors. Missing keys take defaults,
  // with the openness durations and type pool depending on the environment.
  static RunConfig from_json(const Json& j);
  static RunConfig load(const std::filesystem::path& path);
  Json to_json() const;

  world::GameConfig eval_game() const;
  void validate() const;
  // FNV-1a over the canonical JSON with the output directory and seed removed.
  std::string hash() const;
};

osbg::OpennessConfig default_openness(teammates::EnvKind env);

std::uint64_t fnv1a(std::string_view bytes);

}  // namespace openteam::harness
