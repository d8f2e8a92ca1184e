#pragma once

#include <vector>

#include "openteam/harness/checkpoint.hpp"

namespace openteam::harness {

// Average of row a_j of a pairwise table over the partner's actions.
double pairwise_average(const tensor::Tensor& table, std::size_t aj);

// Table value at (aj, ak) minus the mean of the other cells. The default
// averages every cell except (aj, ak); `literal` sums only cells with x != aj
// and y != ak, still dividing by |A|^2 - 1.
double pairwise_deviation(const tensor::Tensor& table, std::size_t aj, std::size_t ak, bool literal = false);

// Sample correlation; 0 when either side has no spread.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct AnalysisRequest {
  std::size_t episodes = 20;
  std::uint64_t seed = 1;
  bool literal = false;
};

// Greedy rollouts of a GPL checkpoint. Per step and ordered agent pair it
// records the averaged pairwise value for every own action and the deviation
// at the executed actions; per episode the means of both at the executed
// actions; and their Pearson correlations with episode return.
Json analyze_pairwise(const Checkpoint& ck, const RunConfig& cfg, const AnalysisRequest& req);

}  // namespace openteam::harness
