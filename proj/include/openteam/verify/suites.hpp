#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "openteam/gpl/values.hpp"
#include "openteam/nn/param_store.hpp"

namespace openteam::verify {

using Rng = std::mt19937_64;

struct CheckResult {
  std::string name;
  std::size_t instances = 0;
  double worst = 0.0;
  double tolerance = 0.0;
  std::size_t kinks = 0;  // coordinates judged by one-sided differences
  double seconds = 0.0;
  bool pass() const { return instances > 0 && worst <= tolerance; }
};

gpl::UtilityTables random_tables(Rng& rng, const std::vector<osbg::AgentId>& ids, std::size_t actions,
                                 std::size_t rank);
gpl::AgentModelOutput random_probs(Rng& rng, const std::vector<osbg::AgentId>& ids, std::size_t actions);

// Enumerates every teammate joint action.
std::vector<double> brute_force_marginal(const gpl::UtilityTables& t, const gpl::AgentModelOutput& probs,
                                         osbg::AgentId learner);
// Term-by-term sum with each pairwise value built from the factors elementwise.
double enumerate_joint(const gpl::UtilityTables& t, const osbg::JointAgentAction& a);

CheckResult marginal_oracle_suite(std::size_t instances, std::uint64_t seed);
CheckResult pairwise_symmetry_suite(std::size_t instances, std::uint64_t seed);
CheckResult joint_enumeration_suite(std::size_t instances, std::uint64_t seed);
CheckResult spi_limit_suite(std::size_t instances, std::uint64_t seed);
CheckResult spi_uniform_suite(std::size_t instances, std::uint64_t seed);

using LossFn = std::function<tensor::Var(const nn::BoundParams&)>;

struct FdResult {
  double worst = 0.0;
  std::size_t kinks = 0;
};
// Central differences over every parameter coordinate, relative error
// |a - n| / max(1, |a|, |n|). Where the left and right one-sided differences
// disagree (a relu kink inside the probe) the closer one-sided value is used.
FdResult param_grad_check(const LossFn& loss, const nn::ParamStore& params, double eps = 1e-5, double tol = 1e-4);

// One entry per network block and per composed loss.
std::vector<CheckResult> gradient_suite(std::size_t instances, std::uint64_t seed);

}  // namespace openteam::verify
