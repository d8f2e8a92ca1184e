#include "openteam/gpl/values.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace openteam::gpl {

std::size_t UtilityTables::row(AgentId id) const {
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw std::invalid_argument("utility tables have no agent " + std::to_string(id));
  return std::size_t(it - ids.begin());
}

Tensor UtilityTables::pairwise(AgentId j, AgentId k) const {
  Tensor out({actions, actions});
  for (std::size_t a = 0; a < actions; ++a)
    for (std::size_t b = 0; b < actions; ++b) out.at(a, b) = pairwise(j, k, int(a), int(b));
  return out;
}

double UtilityTables::pairwise(AgentId j, AgentId k, int a, int b) const {
  const double* fj = factors.ptr() + row(j) * rank * actions;
  const double* fk = factors.ptr() + row(k) * rank * actions;
  double s = 0.0;
  for (std::size_t m = 0; m < rank; ++m) s += fj[m * actions + a] * fk[m * actions + b];
  return s;
}

double joint_q(const UtilityTables& t, const osbg::JointAgentAction& a) {
  double total = 0.0;
  for (std::size_t r = 0; r < t.ids.size(); ++r) {
    if (!a.contains(t.ids[r]))
      throw std::invalid_argument("joint_q: no action for agent " + std::to_string(t.ids[r]));
    total += t.singular.at(r, std::size_t(a.at(t.ids[r])));
  }
  for (AgentId j : t.ids)
    for (AgentId k : t.ids)
      if (j != k) total += t.pairwise(j, k, a.at(j), a.at(k));
  return total;
}

std::vector<double> marginal_q(const UtilityTables& t, const AgentModelOutput& probs, AgentId learner) {
  const std::size_t A = t.actions, K = t.rank;
  const std::size_t li = t.row(learner);
  std::vector<double> q(A);
  for (std::size_t a = 0; a < A; ++a) q[a] = t.singular.at(li, a);

  // e_j = F_j p_j; the teammate-teammate term is |sum e_j|^2 - sum |e_j|^2.
  std::vector<double> e_sum(K, 0.0);
  double base = 0.0, e_sq = 0.0;
  for (std::size_t r = 0; r < t.ids.size(); ++r) {
    if (r == li) continue;
    auto it = probs.find(t.ids[r]);
    if (it == probs.end()) throw std::invalid_argument("marginal_q: no probabilities for agent " +
                                                       std::to_string(t.ids[r]));
    const auto& p = it->second;
    if (p.size() != A) throw std::invalid_argument("marginal_q: probability vector has the wrong length");
    for (std::size_t b = 0; b < A; ++b) base += p[b] * t.singular.at(r, b);
    const double* f = t.factors.ptr() + r * K * A;
    for (std::size_t m = 0; m < K; ++m) {
      double e = 0.0;
      for (std::size_t b = 0; b < A; ++b) e += f[m * A + b] * p[b];
      e_sum[m] += e;
      e_sq += e * e;
    }
  }
  double cross = -e_sq;
  for (double v : e_sum) cross += v * v;
  const double* fi = t.factors.ptr() + li * K * A;
  for (std::size_t a = 0; a < A; ++a) {
    double learner_pair = 0.0;
    for (std::size_t m = 0; m < K; ++m) learner_pair += fi[m * A + a] * e_sum[m];
    // Ordered pairs (i,j) and (j,i) both contribute.
    q[a] += base + 2.0 * learner_pair + cross;
  }
  return q;
}

std::vector<double> spi_policy(const std::vector<double>& qbar, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("spi_policy: temperature must be positive");
  if (qbar.empty()) throw std::invalid_argument("spi_policy: empty value vector");
  const double mx = *std::max_element(qbar.begin(), qbar.end());
  std::vector<double> p(qbar.size());
  double z = 0.0;
  for (std::size_t a = 0; a < qbar.size(); ++a) z += p[a] = std::exp((qbar[a] - mx) / tau);
  for (double& v : p) v /= z;
  return p;
}

double td_target(double r, const std::vector<double>& next_qbar, TargetMode mode, double gamma, double tau,
                 bool terminal) {
  if (terminal || gamma == 0.0) return r;
  if (mode == TargetMode::q_learning) return r + gamma * *std::max_element(next_qbar.begin(), next_qbar.end());
  const auto p = spi_policy(next_qbar, tau);
  double v = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) v += p[a] * next_qbar[a];
  return r + gamma * v;
}

int act(const std::vector<double>& qbar, const Exploration& x, Rng& rng) {
  const int n = int(qbar.size());
  if (x.mode == TargetMode::spi) {
    const auto p = spi_policy(qbar, x.tau);
    return int(std::discrete_distribution<int>(p.begin(), p.end())(rng));
  }
  if (x.epsilon < 0.0 || x.epsilon > 1.0) throw std::invalid_argument("act: epsilon outside [0, 1]");
  if (x.epsilon > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < x.epsilon)
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
  const double mx = *std::max_element(qbar.begin(), qbar.end());
  std::vector<int> best;
  for (int a = 0; a < n; ++a)
    if (qbar[a] == mx) best.push_back(a);
  if (best.size() == 1) return best.front();
  return best[std::uniform_int_distribution<std::size_t>(0, best.size() - 1)(rng)];
}

NllResult agent_model_loss(const AgentModelOutput& probs, const osbg::JointAgentAction& a) {
  NllResult res;
  for (const auto& [id, p] : probs) {
    double v = p.at(std::size_t(a.at(id)));
    if (v < kProbabilityFloor) {
      v = kProbabilityFloor;
      ++res.floored;
    }
    res.loss -= std::log(v);
  }
  return res;
}

double value_loss(double joint, double y) { return 0.5 * (joint - y) * (joint - y); }

namespace tape {

Var joint_q(Var singular, Var factors, std::size_t rank, std::size_t actions, const std::vector<int>& row_actions,
            const std::vector<std::size_t>& offsets) {
  tensor::Tape& t = *singular.tape();
  const std::size_t n = row_actions.size();
  const std::size_t groups = offsets.size() - 1;
  std::vector<std::size_t> group_of(n), picks, factor_picks;
  for (std::size_t g = 0; g < groups; ++g)
    for (std::size_t r = offsets[g]; r < offsets[g + 1]; ++r) group_of[r] = g;
  for (std::size_t r = 0; r < n; ++r) {
    picks.push_back(r * actions + std::size_t(row_actions[r]));
    for (std::size_t m = 0; m < rank; ++m) factor_picks.push_back((r * rank + m) * actions + std::size_t(row_actions[r]));
  }
  // Singular term per group.
  Var s = tensor::select_rows(tensor::reshape(singular, {n * actions}), picks);
  Var single = tensor::segment_sum(tensor::reshape(s, {n, 1}), group_of, groups);
  // g_r = F_r[:, a_r]; pairs over j != k sum to |sum g|^2 - sum |g|^2 per group.
  Var g = tensor::reshape(tensor::select_rows(tensor::reshape(factors, {n * rank * actions}), factor_picks), {n, rank});
  Var gsum = tensor::segment_sum(g, group_of, groups);
  Var self_sq = tensor::segment_sum(tensor::reshape(tensor::sum_axis(g * g, 1), {n, 1}), group_of, groups);
  Var pair = tensor::reshape(tensor::sum_axis(gsum * gsum, 1), {groups, 1}) - self_sq;
  (void)t;
  return tensor::reshape(single + pair, {groups});
}

Var value_loss(Var joint, const std::vector<double>& y) {
  Var diff = joint - joint.tape()->constant(Tensor({y.size()}, y));
  return tensor::scale(tensor::sum(diff * diff), 0.5);
}

Var agent_model_loss(Var probs, const std::vector<std::size_t>& rows, const std::vector<int>& actions,
                     int* floored) {
  tensor::Tape& t = *probs.tape();
  if (rows.size() != actions.size()) throw std::invalid_argument("agent_model_loss: rows and actions differ");
  if (floored) *floored = 0;
  if (rows.empty()) return t.constant(Tensor::scalar(0.0));
  const std::size_t A = probs.shape()[1];
  std::vector<std::size_t> picks;
  for (std::size_t i = 0; i < rows.size(); ++i) picks.push_back(rows[i] * A + std::size_t(actions[i]));
  Var p = tensor::select_rows(tensor::reshape(probs, {probs.shape()[0] * A}), picks);
  Tensor keep({picks.size()}), fill({picks.size()});
  bool any = false;
  for (std::size_t i = 0; i < picks.size(); ++i) {
    if (p.value()[i] < kProbabilityFloor) {
      fill[i] = kProbabilityFloor;
      any = true;
      if (floored) ++*floored;
    } else {
      keep[i] = 1.0;
    }
  }
  if (any) p = p * t.constant(keep) + t.constant(fill);
  return tensor::scale(tensor::sum(tensor::log(p)), -1.0);
}

}  // namespace tape
}  // namespace openteam::gpl
