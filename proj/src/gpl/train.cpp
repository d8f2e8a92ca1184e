#include "openteam/gpl/train.hpp"

#include <algorithm>
#include <stdexcept>

namespace openteam::gpl {
namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(stream), std::uint32_t(index)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (std::uint64_t(words[0]) << 32) | words[1];
}

std::vector<world::OpenGame> make_games(const world::GameConfig& game, std::size_t n, std::uint64_t seed,
                                        std::uint64_t stream) {
  std::vector<world::OpenGame> games;
  games.reserve(n);
  for (std::size_t e = 0; e < n; ++e) games.emplace_back(game, derive_seed(seed, stream, e));
  return games;
}

enum : std::uint64_t { kTrainEnvs = 1, kTrainActs = 2, kEvalEnvs = 3, kEvalActs = 4 };

// Runs episodes until `episodes` have finished; episodes are started in
// environment-index order so the result does not depend on finishing order.
template <class Policy>
std::vector<double> run_episodes(const EvalConfig& cfg, Policy&& choose, Learner* learner) {
  if (cfg.episodes == 0) throw std::invalid_argument("evaluation needs at least one episode");
  const std::size_t P = std::max<std::size_t>(1, std::min(cfg.envs, cfg.episodes));
  auto games = make_games(cfg.game, P, cfg.seed, kEvalEnvs);
  std::vector<envs::Observation> obs(P);
  std::vector<double> ret(P, 0.0);
  std::vector<bool> active(P, true);
  std::vector<double> returns;
  if (learner) learner->resize(P);
  std::size_t started = 0;
  for (std::size_t e = 0; e < P; ++e) {
    games[e].reset();
    obs[e] = games[e].observe();
    if (learner) learner->start_episode(e, obs[e]);
    ++started;
  }
  std::vector<osbg::RosterEvents> events(P);
  std::vector<envs::Observation> next(P);
  while (std::any_of(active.begin(), active.end(), [](bool b) { return b; })) {
    const auto actions = choose(obs);
    std::vector<Transition> tr(P);
    for (std::size_t e = 0; e < P; ++e) {
      if (!active[e]) {
        tr[e].done = true;
        continue;
      }
      auto joint = games[e].teammate_actions();
      joint.set(osbg::kLearnerId, actions[e]);
      auto out = games[e].step(joint);
      ret[e] += out.reward;
      tr[e].done = out.done;
      if (!out.done) {
        events[e] = std::move(out.events);
        next[e] = games[e].observe();
        tr[e].events = &events[e];
        tr[e].next_obs = &next[e];
      }
      tr[e].joint = std::move(joint);
    }
    if (learner) learner->advance(tr);
    for (std::size_t e = 0; e < P; ++e) {
      if (!active[e]) continue;
      if (!tr[e].done) {
        obs[e] = std::move(next[e]);
        continue;
      }
      returns.push_back(ret[e]);
      ret[e] = 0.0;
      if (started < cfg.episodes) {
        games[e].reset();
        obs[e] = games[e].observe();
        if (learner) learner->start_episode(e, obs[e]);
        ++started;
      } else {
        active[e] = false;
      }
    }
  }
  return returns;
}

}  // namespace

ObservationDims observation_dims(const world::GameConfig& game) {
  game.validate();
  world::OpenGame g(game, 0);
  g.reset();
  const auto obs = g.observe();
  return {obs.agent_dim(), obs.u.size(), std::size_t(g.num_actions())};
}

void TrainConfig::validate() const {
  game.validate();
  learner.validate();
  if (envs == 0) throw std::invalid_argument("train: need at least one environment");
  if (checkpoint_interval == 0) throw std::invalid_argument("train: checkpoint interval must be positive");
  if (update_every == 0) throw std::invalid_argument("train: update interval must be positive");
  if (!(eps_start >= 0.0 && eps_start <= 1.0 && eps_end >= 0.0 && eps_end <= 1.0))
    throw std::invalid_argument("train: epsilon outside [0, 1]");
  if (!(eps_fraction >= 0.0 && eps_fraction <= 1.0)) throw std::invalid_argument("train: epsilon fraction outside [0, 1]");
  if (!(polyak >= 0.0 && polyak <= 1.0)) throw std::invalid_argument("train: polyak rate outside [0, 1]");
  const auto dims = observation_dims(game);
  if (dims.x_dim != learner.x_dim || dims.u_dim != learner.u_dim || dims.actions != learner.actions)
    throw std::invalid_argument("train: learner input sizes do not match the environment");
  if (!is_gpl(learner.algorithm) && game.openness.team_limit > int(learner.max_agents))
    throw std::invalid_argument("train: team limit exceeds the padded input's max_agents");
}

double TrainConfig::epsilon(std::uint64_t step) const {
  const double horizon = eps_fraction * double(total_steps);
  if (horizon <= 0.0 || double(step) >= horizon) return eps_end;
  return eps_start + (eps_end - eps_start) * double(step) / horizon;
}

void train(const TrainConfig& cfg, Learner& learner, const CheckpointFn& on_checkpoint) {
  cfg.validate();
  const std::size_t P = cfg.envs;
  auto games = make_games(cfg.game, P, cfg.seed, kTrainEnvs);
  Rng act_rng(derive_seed(cfg.seed, kTrainActs, 0));
  learner.resize(P);
  std::vector<envs::Observation> obs(P), next(P);
  std::vector<osbg::RosterEvents> events(P);
  std::vector<double> ret(P, 0.0);
  for (std::size_t e = 0; e < P; ++e) {
    games[e].reset();
    obs[e] = games[e].observe();
    learner.start_episode(e, obs[e]);
  }

  TrainProgress window;
  std::uint64_t next_checkpoint = 0;
  auto emit = [&](std::uint64_t step) {
    window.step = step;
    if (window.nll_terms) window.nll /= double(window.nll_terms);
    if (window.q_terms) window.mean_qbar /= double(window.q_terms);
    if (on_checkpoint) on_checkpoint(window, learner);
    window = {};
  };
  auto flush = [&](std::uint64_t step) {
    while (next_checkpoint <= step && next_checkpoint <= cfg.total_steps) {
      emit(next_checkpoint);
      next_checkpoint += cfg.checkpoint_interval;
    }
  };
  flush(0);

  const TargetMode mode = cfg.learner.target_mode();
  std::uint64_t step = 0, iteration = 0;
  while (step < cfg.total_steps) {
    Exploration x{mode, cfg.epsilon(step), cfg.learner.tau};
    const auto q = learner.action_values(obs, true);
    std::vector<Transition> tr(P);
    for (std::size_t e = 0; e < P; ++e) {
      window.mean_qbar += *std::max_element(q[e].begin(), q[e].end());
      ++window.q_terms;
      auto joint = games[e].teammate_actions();
      joint.set(osbg::kLearnerId, act(q[e], x, act_rng));
      auto out = games[e].step(joint);
      ret[e] += out.reward;
      tr[e].reward = out.reward;
      tr[e].done = out.done;
      if (!out.done) {
        events[e] = std::move(out.events);
        next[e] = games[e].observe();
        tr[e].events = &events[e];
        tr[e].next_obs = &next[e];
      }
      tr[e].joint = std::move(joint);
    }
    const auto stats = learner.learn(tr);
    window.nll += stats.nll;
    window.floored += stats.floored;
    window.nll_terms += stats.nll_terms;
    if (++iteration % cfg.update_every == 0) learner.apply_update();
    learner.polyak(cfg.polyak);

    for (std::size_t e = 0; e < P; ++e) {
      if (!tr[e].done) {
        obs[e] = std::move(next[e]);
        continue;
      }
      window.returns.push_back(ret[e]);
      ret[e] = 0.0;
      games[e].reset();
      obs[e] = games[e].observe();
      learner.start_episode(e, obs[e]);
    }
    step += P;
    flush(std::min(step, cfg.total_steps));
  }
}

std::vector<double> evaluate_policy(Learner& learner, const EvalConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, kEvalActs, 0));
  Exploration x{learner.config().target_mode(), 0.0, learner.config().tau};
  return run_episodes(
      cfg,
      [&](const std::vector<envs::Observation>& obs) {
        const auto q = learner.action_values(obs, false);
        std::vector<int> a(obs.size());
        for (std::size_t e = 0; e < obs.size(); ++e) a[e] = act(q[e], x, rng);
        return a;
      },
      &learner);
}

std::vector<double> evaluate_random(const EvalConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, kEvalActs, 0));
  const int A = int(observation_dims(cfg.game).actions);
  return run_episodes(
      cfg,
      [&](const std::vector<envs::Observation>& obs) {
        std::vector<int> a(obs.size());
        for (auto& v : a) v = std::uniform_int_distribution<int>(0, A - 1)(rng);
        return a;
      },
      nullptr);
}

}  // namespace openteam::gpl
