#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "openteam/harness/checkpoint.hpp"

namespace openteam::harness {

struct MetricRecord {
  std::uint64_t step = 0;
  double mean_return = 0.0;
  double ci95 = 0.0;  // 1.96 * standard error
  std::size_t episodes = 0;
  std::optional<double> nll;
  std::optional<double> mean_qbar;

  static MetricRecord from_returns(std::uint64_t step, const std::vector<double>& returns);
  Json to_json() const;
};

// Appends one compact JSON object per line.
void append_metric(std::ostream& out, const MetricRecord& m);

std::filesystem::path checkpoint_dir(const std::filesystem::path& run_dir, std::uint64_t step);

// Trains, writing config.json, metrics.jsonl and checkpoints/step_<n>/ under
// cfg.output_dir. Returns the run directory.
std::filesystem::path run_training(const RunConfig& cfg);

struct EvalRequest {
  std::size_t episodes = 100;
  std::uint64_t seed = 1;
  std::optional<int> team_limit;  // overrides the eval openness limit
};

MetricRecord evaluate(const Checkpoint& ck, const RunConfig& cfg, const EvalRequest& req);
MetricRecord evaluate_random(const RunConfig& cfg, const EvalRequest& req);

}  // namespace openteam::harness
