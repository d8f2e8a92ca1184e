#include "openteam/harness/run.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <numeric>

namespace openteam::harness {

MetricRecord MetricRecord::from_returns(std::uint64_t step, const std::vector<double>& returns) {
  MetricRecord m;
  m.step = step;
  m.episodes = returns.size();
  if (returns.empty()) return m;
  const double n = double(returns.size());
  m.mean_return = std::accumulate(returns.begin(), returns.end(), 0.0) / n;
  if (returns.size() > 1) {
    double ss = 0.0;
    for (double r : returns) ss += (r - m.mean_return) * (r - m.mean_return);
    m.ci95 = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return m;
}

Json MetricRecord::to_json() const {
  Json j{{"step", step}, {"mean_return", mean_return}, {"ci95", ci95}, {"episodes", episodes}};
  if (nll) j["nll"] = *nll;
  if (mean_qbar) j["mean_qbar"] = *mean_qbar;
  return j;
}

void append_metric(std::ostream& out, const MetricRecord& m) { out << m.to_json().dump() << "\n" << std::flush; }

std::filesystem::path checkpoint_dir(const std::filesystem::path& run_dir, std::uint64_t step) {
  return run_dir / "checkpoints" / fmt::format("step_{:012d}", step);
}

std::filesystem::path run_training(const RunConfig& cfg) {
  cfg.validate();
  const std::filesystem::path dir = cfg.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  {
    std::ofstream out(dir / "config.json");
    if (!out) throw std::runtime_error("cannot write to output directory " + dir.string());
    out << cfg.to_json().dump(2) << "\n";
  }
  std::ofstream metrics(dir / "metrics.jsonl", std::ios::trunc);
  if (!metrics) throw std::runtime_error("cannot write " + (dir / "metrics.jsonl").string());

  gpl::Learner learner(cfg.train.learner, cfg.train.seed);
  gpl::train(cfg.train, learner, [&](const gpl::TrainProgress& p, const gpl::Learner& l) {
    MetricRecord m = MetricRecord::from_returns(p.step, p.returns);
    if (p.nll_terms) m.nll = p.nll;
    if (p.q_terms) m.mean_qbar = p.mean_qbar;
    append_metric(metrics, m);
    save_checkpoint(checkpoint_dir(dir, p.step), make_checkpoint(cfg, p.step, l));
  });
  return dir;
}

namespace {

gpl::EvalConfig eval_config(const RunConfig& cfg, const EvalRequest& req) {
  if (req.episodes == 0) throw ConfigError("evaluation needs at least one episode");
  world::GameConfig game = cfg.eval_game();
  if (req.team_limit) game.openness.team_limit = *req.team_limit;
  try {
    game.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return {game, req.episodes, std::min<std::size_t>(cfg.train.envs, req.episodes), req.seed};
}

}  // namespace

MetricRecord evaluate(const Checkpoint& ck, const RunConfig& cfg, const EvalRequest& req) {
  const auto ec = eval_config(cfg, req);
  if (!gpl::is_gpl(cfg.train.learner.algorithm) && ec.game.openness.team_limit > int(cfg.train.learner.max_agents))
    throw ConfigError(fmt::format("team limit {} exceeds the padded input's max_agents {}", ec.game.openness.team_limit,
                                  cfg.train.learner.max_agents));
  auto learner = restore_learner(ck, cfg, req.seed);
  return MetricRecord::from_returns(ck.step, gpl::evaluate_policy(*learner, ec));
}

MetricRecord evaluate_random(const RunConfig& cfg, const EvalRequest& req) {
  return MetricRecord::from_returns(0, gpl::evaluate_random(eval_config(cfg, req)));
}

}  // namespace openteam::harness
