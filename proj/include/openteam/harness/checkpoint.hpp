#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "openteam/harness/config.hpp"

namespace openteam::harness {

struct Checkpoint {
  std::string config_hash;
  std::uint64_t step = 0;
  Json config;  // the run config without output_dir, for rebuilding the network
  nn::ParamStore value;
  nn::ParamStore model;
  nn::ParamStore target;
};

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Checkpoint make_checkpoint(const RunConfig& cfg, std::uint64_t step, const gpl::Learner& learner);

// <dir>/manifest.json and <dir>/params.bin (little-endian doubles in manifest order).
void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& ck);
// Validates the payload length and every recorded shape against the network
// the embedded config describes; mismatches are reported as a diff.
Checkpoint load_checkpoint(const std::filesystem::path& dir);

// Differences between two stores' layouts, one line per entry; empty when equal.
std::string layout_diff(const nn::ParamStore& expected, const nn::ParamStore& actual);

// Learner with the checkpoint's parameters, built from `cfg`'s network. Throws
// CheckpointError with a shape diff when they do not fit.
std::unique_ptr<gpl::Learner> restore_learner(const Checkpoint& ck, const RunConfig& cfg, std::uint64_t seed);

}  // namespace openteam::harness
