#include "openteam/gpl/learner.hpp"

#include <stdexcept>
#include <string>

namespace openteam::gpl {
namespace {

Tensor stack_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t w = rows.front().size();
  Tensor t({rows.size(), w});
  for (std::size_t r = 0; r < rows.size(); ++r) std::copy(rows[r].begin(), rows[r].end(), t.ptr() + r * w);
  return t;
}

Tensor stack_inputs(std::span<const envs::Observation* const> obs, std::size_t rows, std::size_t width) {
  Tensor t({rows, width});
  std::size_t r0 = 0;
  for (const auto* o : obs) {
    Tensor part = agent_inputs(*o);
    if (part.shape()[1] != width) throw std::invalid_argument("learner: observation width does not match the network");
    std::copy(part.ptr(), part.ptr() + part.numel(), t.ptr() + r0 * width);
    r0 += part.shape()[0];
  }
  return t;
}

std::vector<double> row_of(const Tensor& t, std::size_t r) {
  const std::size_t w = t.shape()[1];
  return std::vector<double>(t.ptr() + r * w, t.ptr() + (r + 1) * w);
}

}  // namespace

Algorithm parse_algorithm(std::string_view s) {
  if (s == "GPL-Q") return Algorithm::gpl_q;
  if (s == "GPL-SPI") return Algorithm::gpl_spi;
  if (s == "QL") return Algorithm::ql;
  if (s == "QL-AM") return Algorithm::ql_am;
  throw std::invalid_argument("unknown algorithm '" + std::string(s) + "'");
}

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::gpl_q: return "GPL-Q";
    case Algorithm::gpl_spi: return "GPL-SPI";
    case Algorithm::ql: return "QL";
    case Algorithm::ql_am: return "QL-AM";
  }
  return "?";
}

bool is_gpl(Algorithm a) { return a == Algorithm::gpl_q || a == Algorithm::gpl_spi; }
bool has_agent_model(Algorithm a) { return a != Algorithm::ql; }

void LearnerConfig::validate() const {
  if (x_dim == 0 || actions < 2) throw std::invalid_argument("learner: observation and action sizes must be set");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("learner: gamma outside [0, 1]");
  if (algorithm == Algorithm::gpl_spi && !(tau > 0.0))
    throw std::invalid_argument("learner: SPI needs a positive temperature");
  if (!is_gpl(algorithm) && max_agents < 1) throw std::invalid_argument("learner: max_agents must be positive");
  if (adam.lr < 0.0) throw std::invalid_argument("learner: negative learning rate");
  if (is_gpl(algorithm)) gpl_spec().validate();
  else ql_spec().validate();
}

GplSpec LearnerConfig::gpl_spec() const {
  GplSpec s;
  s.input = x_dim + u_dim;
  s.actions = actions;
  s.rank = widths.rank;
  s.embed_hidden = widths.embed_hidden;
  s.lstm = widths.lstm;
  s.beta_hidden = widths.beta_hidden;
  s.delta_hidden = widths.delta_hidden;
  s.edge_out = widths.edge_out;
  s.node_out = widths.node_out;
  s.eta_hidden = widths.eta_hidden;
  return s;
}

QlSpec LearnerConfig::ql_spec() const {
  QlSpec s;
  s.input = max_agents * x_dim + u_dim;
  if (algorithm == Algorithm::ql_am) s.input += (max_agents - 1) * actions;
  s.actions = actions;
  s.embed_hidden = widths.embed_hidden;
  s.lstm = widths.lstm;
  s.head_hidden = widths.beta_hidden;
  return s;
}

TargetMode LearnerConfig::target_mode() const {
  return algorithm == Algorithm::gpl_spi ? TargetMode::spi : TargetMode::q_learning;
}

struct Learner::Pending {
  std::unique_ptr<tensor::Tape> tape;
  std::unique_ptr<BoundParams> value;
  std::unique_ptr<BoundParams> model;
  Groups groups;
  Var value_h, value_c, model_h, model_c;
  UtilityVars util;
  Var probs;
  Var q;
  bool train = false;
};

Learner::Learner(LearnerConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)), rng_(seed) {
  cfg_.validate();
  gpl_ = cfg_.gpl_spec();
  if (is_gpl(cfg_.algorithm)) {
    value_ = init_value_params(gpl_, rng_);
  } else {
    ql_ = cfg_.ql_spec();
    value_ = init_ql_params(ql_, rng_);
  }
  if (has_agent_model(cfg_.algorithm)) model_ = init_model_params(gpl_, rng_);
  target_ = value_;
  adam_value_ = nn::AdamState(cfg_.adam);
  adam_model_ = nn::AdamState(cfg_.adam);
}

Learner::Learner(LearnerConfig cfg, ParamStore value, ParamStore model, ParamStore target, std::uint64_t seed)
    : Learner(cfg, seed) {
  auto check = [](const ParamStore& want, const ParamStore& got, const char* what) {
    if (!want.same_layout(got)) throw std::invalid_argument(std::string("learner: ") + what + " parameters do not match the configured network");
  };
  check(value_, value, "value");
  check(model_, model, "agent model");
  check(value_, target, "target");
  value_ = std::move(value);
  model_ = std::move(model);
  target_ = std::move(target);
}

Learner::~Learner() = default;

void Learner::resize(std::size_t envs) {
  stores_.assign(envs, EmbeddingStore(cfg_.widths.lstm));
  slots_.assign(envs, SlotMap(is_gpl(cfg_.algorithm) ? 1 : cfg_.max_agents));
  tables_.assign(envs, {});
  probs_.assign(envs, {});
  pending_.reset();
}

void Learner::start_episode(std::size_t env, const envs::Observation& obs) {
  auto& st = stores_.at(env);
  st.clear();
  st.preprocess({}, obs.ids);
  auto& sl = slots_[env];
  sl.clear();
  if (!is_gpl(cfg_.algorithm))
    for (std::size_t r = 1; r < obs.ids.size(); ++r) sl.assign(obs.ids[r], rng_);
}

Groups Learner::groups_for(std::span<const envs::Observation> obs) const {
  if (obs.size() != stores_.size()) throw std::invalid_argument("learner: one observation per environment expected");
  Groups g;
  for (std::size_t e = 0; e < obs.size(); ++e) {
    const auto& ids = obs[e].ids;
    if (ids.size() != stores_[e].size()) throw std::invalid_argument("learner: observation and recurrent state are misaligned");
    for (AgentId id : ids)
      if (!stores_[e].contains(id)) throw std::invalid_argument("learner: no recurrent state for agent " + std::to_string(id));
    g.add(ids);
  }
  return g;
}

std::vector<std::vector<double>> Learner::action_values(std::span<const envs::Observation> obs, bool train) {
  auto p = std::make_unique<Pending>();
  p->groups = groups_for(obs);
  p->train = train;
  const Groups& g = p->groups;
  const std::size_t n = g.rows(), E = g.count(), H = cfg_.widths.lstm;
  p->tape = std::make_unique<tensor::Tape>();
  tensor::Tape& tape = *p->tape;
  p->value = std::make_unique<BoundParams>(tape, value_, train);
  if (!model_.empty()) p->model = std::make_unique<BoundParams>(tape, model_, train);

  std::vector<const envs::Observation*> ptrs;
  for (const auto& o : obs) ptrs.push_back(&o);
  Var input;
  if (is_gpl(cfg_.algorithm) || p->model) input = tape.constant(stack_inputs(ptrs, n, gpl_.input));

  if (p->model) {
    Tensor h({n, H}), c({n, H});
    for (std::size_t e = 0; e < E; ++e)
      stores_[e].gather(EmbeddingStore::model, obs[e].ids, h, c, g.offsets[e]);
    auto r = embed_types(*p->model, gpl_, kModelPrefix, input, tape.constant(h), tape.constant(c));
    p->model_h = r.h;
    p->model_c = r.c;
    p->probs = teammate_probs(*p->model, gpl_, r.h, g);
    for (std::size_t e = 0; e < E; ++e) probs_[e] = probs_of(p->probs.value(), g, e);
  }

  std::vector<std::vector<double>> out(E);
  if (is_gpl(cfg_.algorithm)) {
    Tensor h({n, H}), c({n, H});
    for (std::size_t e = 0; e < E; ++e)
      stores_[e].gather(EmbeddingStore::value, obs[e].ids, h, c, g.offsets[e]);
    auto r = embed_types(*p->value, gpl_, kValuePrefix, input, tape.constant(h), tape.constant(c));
    p->value_h = r.h;
    p->value_c = r.c;
    p->util = compute_utilities(*p->value, gpl_, r.h, g);
    for (std::size_t e = 0; e < E; ++e) {
      tables_[e] = tables_of(p->util, gpl_, g, e);
      out[e] = marginal_q(tables_[e], probs_[e], osbg::kLearnerId);
    }
  } else {
    std::vector<std::vector<double>> padded(E);
    Tensor h({E, H}), c({E, H});
    const AgentId learner[] = {osbg::kLearnerId};
    for (std::size_t e = 0; e < E; ++e) {
      padded[e] = pad_observation(obs[e], cfg_.max_agents, slots_[e]);
      if (cfg_.algorithm == Algorithm::ql_am) {
        auto pp = pad_probs(probs_[e], cfg_.actions, slots_[e]);
        padded[e].insert(padded[e].end(), pp.begin(), pp.end());
      }
      stores_[e].gather(EmbeddingStore::value, learner, h, c, e);
    }
    auto r = ql_forward(*p->value, ql_, tape.constant(stack_rows(padded)), tape.constant(h), tape.constant(c));
    p->value_h = r.h;
    p->value_c = r.c;
    p->q = r.q;
    for (std::size_t e = 0; e < E; ++e) out[e] = row_of(r.q.value(), e);
  }
  pending_ = std::move(p);
  return out;
}

void Learner::commit(std::span<const Transition> tr) {
  if (!pending_) throw std::logic_error("learner: no pending step");
  if (tr.size() != stores_.size()) throw std::invalid_argument("learner: one transition per environment expected");
  const Groups& g = pending_->groups;
  const bool gpl = is_gpl(cfg_.algorithm);
  for (std::size_t e = 0; e < tr.size(); ++e) {
    std::span<const AgentId> ids(g.ids.data() + g.offsets[e], g.offsets[e + 1] - g.offsets[e]);
    if (gpl) {
      stores_[e].scatter(EmbeddingStore::value, ids, pending_->value_h.value(), pending_->value_c.value(),
                         g.offsets[e]);
    } else {
      stores_[e].scatter(EmbeddingStore::value, ids.first(1), pending_->value_h.value(), pending_->value_c.value(), e);
    }
    if (pending_->model)
      stores_[e].scatter(EmbeddingStore::model, ids, pending_->model_h.value(), pending_->model_c.value(),
                         g.offsets[e]);
    if (tr[e].done) continue;
    if (!tr[e].events) throw std::invalid_argument("learner: non-terminal transition without roster events");
    const auto& ev = *tr[e].events;
    const auto arrivals = arrival_ids(ev);
    stores_[e].preprocess(ev.departures, arrivals);
    if (!gpl) {
      for (AgentId id : ev.departures) slots_[e].release(id);
      for (AgentId id : arrivals) slots_[e].assign(id, rng_);
    }
  }
}

std::vector<std::vector<double>> Learner::target_values(std::span<const envs::Observation* const> obs,
                                                        std::span<const std::size_t> envs) {
  std::vector<std::vector<double>> out(envs.size());
  if (envs.empty()) return out;
  Groups g;
  for (std::size_t i = 0; i < envs.size(); ++i) {
    if (obs[i]->ids.size() != stores_[envs[i]].size())
      throw std::invalid_argument("learner: next observation and recurrent state are misaligned");
    g.add(obs[i]->ids);
  }
  const std::size_t n = g.rows(), E = envs.size(), H = cfg_.widths.lstm;
  tensor::Tape tape;
  BoundParams target(tape, target_, false);
  std::unique_ptr<BoundParams> model;
  if (!model_.empty()) model = std::make_unique<BoundParams>(tape, model_, false);
  Var input;
  if (is_gpl(cfg_.algorithm) || model) input = tape.constant(stack_inputs(obs, n, gpl_.input));

  std::vector<AgentModelOutput> probs(E);
  if (model) {
    Tensor h({n, H}), c({n, H});
    for (std::size_t i = 0; i < E; ++i)
      stores_[envs[i]].gather(EmbeddingStore::model, obs[i]->ids, h, c, g.offsets[i]);
    auto r = embed_types(*model, gpl_, kModelPrefix, input, tape.constant(h), tape.constant(c));
    Var pr = teammate_probs(*model, gpl_, r.h, g);
    for (std::size_t i = 0; i < E; ++i) probs[i] = probs_of(pr.value(), g, i);
  }

  if (is_gpl(cfg_.algorithm)) {
    Tensor h({n, H}), c({n, H});
    for (std::size_t i = 0; i < E; ++i)
      stores_[envs[i]].gather(EmbeddingStore::target, obs[i]->ids, h, c, g.offsets[i]);
    auto r = embed_types(target, gpl_, kValuePrefix, input, tape.constant(h), tape.constant(c));
    auto util = compute_utilities(target, gpl_, r.h, g);
    for (std::size_t i = 0; i < E; ++i) {
      out[i] = marginal_q(tables_of(util, gpl_, g, i), probs[i], osbg::kLearnerId);
      std::span<const AgentId> ids(g.ids.data() + g.offsets[i], g.offsets[i + 1] - g.offsets[i]);
      stores_[envs[i]].scatter(EmbeddingStore::target, ids, r.h.value(), r.c.value(), g.offsets[i]);
    }
  } else {
    std::vector<std::vector<double>> padded(E);
    Tensor h({E, H}), c({E, H});
    const AgentId learner[] = {osbg::kLearnerId};
    for (std::size_t i = 0; i < E; ++i) {
      padded[i] = pad_observation(*obs[i], cfg_.max_agents, slots_[envs[i]]);
      if (cfg_.algorithm == Algorithm::ql_am) {
        auto pp = pad_probs(probs[i], cfg_.actions, slots_[envs[i]]);
        padded[i].insert(padded[i].end(), pp.begin(), pp.end());
      }
      stores_[envs[i]].gather(EmbeddingStore::target, learner, h, c, i);
    }
    auto r = ql_forward(target, ql_, tape.constant(stack_rows(padded)), tape.constant(h), tape.constant(c));
    for (std::size_t i = 0; i < E; ++i) {
      out[i] = row_of(r.q.value(), i);
      stores_[envs[i]].scatter(EmbeddingStore::target, learner, r.h.value(), r.c.value(), i);
    }
  }
  return out;
}

LearnStats Learner::learn(std::span<const Transition> tr) {
  if (!pending_ || !pending_->train) throw std::logic_error("learner: learn() needs a pending training step");
  Pending& p = *pending_;
  const Groups& g = p.groups;
  const std::size_t E = g.count(), A = cfg_.actions;
  if (tr.size() != E) throw std::invalid_argument("learner: one transition per environment expected");
  LearnStats stats;

  Var joint;
  if (is_gpl(cfg_.algorithm)) {
    const auto group = g.group_of();
    std::vector<int> acts(g.rows());
    for (std::size_t r = 0; r < g.rows(); ++r) acts[r] = tr[group[r]].joint.at(g.ids[r]);
    joint = tape::joint_q(p.util.singular, p.util.factors, gpl_.rank, A, acts, g.offsets);
  } else {
    std::vector<std::size_t> picks(E);
    for (std::size_t e = 0; e < E; ++e) picks[e] = e * A + std::size_t(tr[e].joint.at(osbg::kLearnerId));
    joint = tensor::select_rows(tensor::reshape(p.q, {E * A}), picks);
  }
  Var nll;
  if (p.model) {
    std::vector<std::size_t> rows;
    std::vector<int> acts;
    for (std::size_t e = 0; e < E; ++e)
      for (std::size_t r = g.offsets[e] + 1; r < g.offsets[e + 1]; ++r) {
        rows.push_back(r);
        acts.push_back(tr[e].joint.at(g.ids[r]));
      }
    nll = tape::agent_model_loss(p.probs, rows, acts, &stats.floored);
    stats.nll = nll.value().item();
    stats.nll_terms = rows.size();
  }

  commit(tr);

  std::vector<double> y(E);
  std::vector<const envs::Observation*> next;
  std::vector<std::size_t> live;
  for (std::size_t e = 0; e < E; ++e) {
    y[e] = tr[e].reward;
    if (!tr[e].done) {
      if (!tr[e].next_obs) throw std::invalid_argument("learner: non-terminal transition without next observation");
      next.push_back(tr[e].next_obs);
      live.push_back(e);
    }
  }
  const auto next_q = target_values(next, live);
  for (std::size_t i = 0; i < live.size(); ++i)
    y[live[i]] = td_target(tr[live[i]].reward, next_q[i], cfg_.target_mode(), cfg_.gamma, cfg_.tau);

  Var vloss = tape::value_loss(joint, y);
  stats.value_loss = vloss.value().item();
  Var loss = nll.valid() ? vloss + nll : vloss;
  auto grads = p.tape->backward(loss);
  p.value->accumulate(grads, grads_value_);
  if (p.model) p.model->accumulate(grads, grads_model_);
  pending_.reset();
  return stats;
}

void Learner::advance(std::span<const Transition> tr) {
  commit(tr);
  pending_.reset();
}

bool Learner::apply_update() {
  if (grads_value_.empty() && grads_model_.empty()) return false;
  if (!grads_value_.empty()) nn::adam_step(value_, grads_value_, adam_value_);
  if (!grads_model_.empty()) nn::adam_step(model_, grads_model_, adam_model_);
  grads_value_.clear();
  grads_model_.clear();
  return true;
}

void Learner::polyak(double alpha) { nn::polyak_update(target_, value_, alpha); }

const UtilityTables& Learner::last_tables(std::size_t env) const {
  if (!is_gpl(cfg_.algorithm)) throw std::logic_error("learner: utility tables exist only for GPL");
  return tables_.at(env);
}

const AgentModelOutput& Learner::last_probs(std::size_t env) const { return probs_.at(env); }

}  // namespace openteam::gpl
