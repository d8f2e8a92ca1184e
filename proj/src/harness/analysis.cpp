#include "openteam/harness/analysis.hpp"

#include <cmath>
#include <numeric>

namespace openteam::harness {

double pairwise_average(const tensor::Tensor& table, std::size_t aj) {
  const std::size_t A = table.shape()[1];
  double s = 0.0;
  for (std::size_t b = 0; b < A; ++b) s += table.at(aj, b);
  return s / double(A);
}

double pairwise_deviation(const tensor::Tensor& table, std::size_t aj, std::size_t ak, bool literal) {
  const std::size_t A = table.shape()[0];
  if (A < 2) return 0.0;
  double rest = 0.0;
  for (std::size_t x = 0; x < A; ++x)
    for (std::size_t y = 0; y < A; ++y) {
      if (x == aj && y == ak) continue;
      if (literal && (x == aj || y == ak)) continue;
      rest += table.at(x, y);
    }
  return table.at(aj, ak) - rest / double(A * A - 1);
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  const double mx = std::accumulate(x.begin(), x.begin() + long(n), 0.0) / double(n);
  const double my = std::accumulate(y.begin(), y.begin() + long(n), 0.0) / double(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

Json analyze_pairwise(const Checkpoint& ck, const RunConfig& cfg, const AnalysisRequest& req) {
  if (!gpl::is_gpl(cfg.train.learner.algorithm))
    throw ConfigError("pairwise analysis needs a GPL checkpoint, not " +
                      std::string(gpl::algorithm_name(cfg.train.learner.algorithm)));
  if (req.episodes == 0) throw ConfigError("analysis needs at least one episode");
  auto learner = restore_learner(ck, cfg, req.seed);
  learner->resize(1);
  const world::GameConfig game = cfg.eval_game();
  world::OpenGame env(game, req.seed);
  gpl::Rng rng(req.seed);
  const gpl::Exploration greedy{gpl::TargetMode::q_learning, 0.0, cfg.train.learner.tau};

  Json steps = Json::array(), episodes = Json::array();
  std::vector<double> returns, mean_avg, mean_dev;
  for (std::size_t ep = 0; ep < req.episodes; ++ep) {
    env.reset();
    envs::Observation obs = env.observe();
    learner->start_episode(0, obs);
    double ret = 0.0, avg_sum = 0.0, dev_sum = 0.0;
    std::size_t terms = 0;
    for (int t = 0;; ++t) {
      const auto q = learner->action_values(std::span(&obs, 1), false);
      const gpl::UtilityTables tables = learner->last_tables(0);
      auto joint = env.teammate_actions();
      joint.set(osbg::kLearnerId, gpl::act(q[0], greedy, rng));
      Json pairs = Json::array();
      for (osbg::AgentId j : tables.ids)
        for (osbg::AgentId k : tables.ids) {
          if (j == k) continue;
          const tensor::Tensor table = tables.pairwise(j, k);
          std::vector<double> avg(tables.actions);
          for (std::size_t a = 0; a < tables.actions; ++a) avg[a] = pairwise_average(table, a);
          const auto aj = std::size_t(joint.at(j)), ak = std::size_t(joint.at(k));
          const double dev = pairwise_deviation(table, aj, ak, req.literal);
          avg_sum += avg[aj];
          dev_sum += dev;
          ++terms;
          pairs.push_back({{"j", j}, {"k", k}, {"qbar_jk", avg}, {"a_j", aj}, {"a_k", ak}, {"c_jk", dev}});
        }
      steps.push_back({{"episode", ep}, {"t", t}, {"pairs", std::move(pairs)}});
      auto out = env.step(joint);
      ret += out.reward;
      gpl::Transition tr{joint, out.reward, out.done, nullptr, &out.events};
      envs::Observation next;
      if (!out.done) {
        next = env.observe();
        tr.next_obs = &next;
      }
      learner->advance(std::span(&tr, 1));
      if (out.done) break;
      obs = std::move(next);
    }
    const double a = terms ? avg_sum / double(terms) : 0.0, d = terms ? dev_sum / double(terms) : 0.0;
    returns.push_back(ret);
    mean_avg.push_back(a);
    mean_dev.push_back(d);
    episodes.push_back({{"episode", ep}, {"return", ret}, {"mean_qbar_jk", a}, {"mean_c_jk", d}, {"pair_terms", terms}});
  }
  return {{"step", ck.step},
          {"literal", req.literal},
          {"episodes", std::move(episodes)},
          {"pearson", {{"qbar_jk", pearson(mean_avg, returns)}, {"c_jk", pearson(mean_dev, returns)}}},
          {"steps", std::move(steps)}};
}

}  // namespace openteam::harness
