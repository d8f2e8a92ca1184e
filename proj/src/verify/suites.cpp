#include "openteam/verify/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "openteam/gpl/baseline.hpp"
#include "openteam/gpl/network.hpp"
#include "openteam/nn/layers.hpp"

namespace openteam::verify {
namespace {

using osbg::AgentId;
using tensor::Tape;
using tensor::Tensor;
using tensor::Var;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Tensor uniform(Rng& rng, tensor::Shape shape, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = d(rng);
  return t;
}

std::vector<AgentId> agent_ids(std::size_t teammates) {
  std::vector<AgentId> ids{osbg::kLearnerId};
  for (std::size_t j = 1; j <= teammates; ++j) ids.push_back(AgentId(j));
  return ids;
}

double relative(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

void jitter(nn::ParamStore& s, Rng& rng) {
  std::uniform_real_distribution<double> d(-0.1, 0.1);
  for (auto& e : s.entries())
    for (double& v : e.value.data()) v += d(rng);
}

gpl::GplSpec tiny_gpl(Rng& rng) {
  gpl::GplSpec s;
  s.input = pick(rng, 2, 5);
  s.actions = pick(rng, 2, 4);
  s.rank = pick(rng, 1, 3);
  s.embed_hidden = {pick(rng, 2, 4), pick(rng, 2, 4)};
  s.lstm = pick(rng, 2, 4);
  s.beta_hidden = {pick(rng, 2, 4)};
  s.delta_hidden = {pick(rng, 2, 4)};
  s.edge_out = pick(rng, 2, 3);
  s.node_out = pick(rng, 2, 4);
  s.eta_hidden = pick(rng, 2, 3);
  return s;
}

gpl::Groups random_groups(Rng& rng, std::size_t max_groups = 3, std::size_t max_size = 3) {
  gpl::Groups g;
  const std::size_t groups = pick(rng, 1, max_groups);
  for (std::size_t k = 0; k < groups; ++k) g.add(agent_ids(pick(rng, 0, max_size - 1)));
  return g;
}

template <class Build>
CheckResult gradient_block(const std::string& name, std::size_t instances, Rng& rng, Build&& build) {
  Timer timer;
  CheckResult r{name, 0, 0.0, 1e-4};
  for (std::size_t i = 0; i < instances; ++i) {
    nn::ParamStore params;
    LossFn loss = build(rng, params);
    jitter(params, rng);
    const FdResult fd = param_grad_check(loss, params);
    r.worst = std::max(r.worst, fd.worst);
    r.kinks += fd.kinks;
    ++r.instances;
  }
  r.seconds = timer.seconds();
  return r;
}

}  // namespace

gpl::UtilityTables random_tables(Rng& rng, const std::vector<AgentId>& ids, std::size_t actions, std::size_t rank) {
  gpl::UtilityTables t;
  t.ids = ids;
  t.actions = actions;
  t.rank = rank;
  t.singular = uniform(rng, {ids.size(), actions});
  t.factors = uniform(rng, {ids.size(), rank * actions});
  return t;
}

gpl::AgentModelOutput random_probs(Rng& rng, const std::vector<AgentId>& ids, std::size_t actions) {
  gpl::AgentModelOutput out;
  std::exponential_distribution<double> d(1.0);
  for (AgentId id : ids) {
    std::vector<double> p(actions);
    double z = 0.0;
    for (double& v : p) z += v = d(rng);
    for (double& v : p) v /= z;
    out[id] = std::move(p);
  }
  return out;
}

std::vector<double> brute_force_marginal(const gpl::UtilityTables& t, const gpl::AgentModelOutput& probs,
                                         AgentId learner) {
  std::vector<AgentId> mates;
  for (AgentId id : t.ids)
    if (id != learner) mates.push_back(id);
  const std::size_t A = t.actions;
  std::vector<double> q(A, 0.0);
  for (std::size_t a = 0; a < A; ++a) {
    std::vector<int> digits(mates.size(), 0);
    while (true) {
      osbg::JointAgentAction joint;
      joint.set(learner, int(a));
      double weight = 1.0;
      for (std::size_t j = 0; j < mates.size(); ++j) {
        joint.set(mates[j], digits[j]);
        weight *= probs.at(mates[j])[std::size_t(digits[j])];
      }
      q[a] += weight * enumerate_joint(t, joint);
      std::size_t k = 0;
      while (k < digits.size() && ++digits[k] == int(A)) digits[k++] = 0;
      if (k == digits.size()) break;
    }
  }
  return q;
}

double enumerate_joint(const gpl::UtilityTables& t, const osbg::JointAgentAction& a) {
  const std::size_t A = t.actions, K = t.rank;
  double total = 0.0;
  for (std::size_t j = 0; j < t.ids.size(); ++j) total += t.singular.at(j, std::size_t(a.at(t.ids[j])));
  for (std::size_t j = 0; j < t.ids.size(); ++j)
    for (std::size_t k = 0; k < t.ids.size(); ++k) {
      if (j == k) continue;
      const std::size_t aj = std::size_t(a.at(t.ids[j])), ak = std::size_t(a.at(t.ids[k]));
      for (std::size_t m = 0; m < K; ++m) total += t.factors.at(j, m * A + aj) * t.factors.at(k, m * A + ak);
    }
  return total;
}

CheckResult marginal_oracle_suite(std::size_t instances, std::uint64_t seed) {
  Timer timer;
  Rng rng(seed);
  CheckResult r{"marginalization", 0, 0.0, 1e-6};
  for (std::size_t i = 0; i < instances; ++i) {
    const auto ids = agent_ids(pick(rng, 1, 4));
    const std::size_t A = pick(rng, 2, 6);
    const auto t = random_tables(rng, ids, A, pick(rng, 1, 5));
    const auto probs = random_probs(rng, {ids.begin() + 1, ids.end()}, A);
    const auto fast = gpl::marginal_q(t, probs, osbg::kLearnerId);
    const auto slow = brute_force_marginal(t, probs, osbg::kLearnerId);
    for (std::size_t a = 0; a < A; ++a)
      r.worst = std::max(r.worst, std::abs(fast[a] - slow[a]) / std::max(1e-12, std::abs(slow[a])));
    ++r.instances;
  }
  r.seconds = timer.seconds();
  return r;
}

CheckResult pairwise_symmetry_suite(std::size_t instances, std::uint64_t seed) {
  Timer timer;
  Rng rng(seed);
  CheckResult r{"pairwise symmetry", 0, 0.0, 1e-12};
  for (std::size_t i = 0; i < instances; ++i) {
    const auto ids = agent_ids(pick(rng, 1, 4));
    const auto t = random_tables(rng, ids, pick(rng, 2, 6), pick(rng, 1, 5));
    for (AgentId j : ids)
      for (AgentId k : ids) {
        const Tensor jk = t.pairwise(j, k), kj = t.pairwise(k, j);
        for (std::size_t a = 0; a < t.actions; ++a)
          for (std::size_t b = 0; b < t.actions; ++b) r.worst = std::max(r.worst, std::abs(jk.at(a, b) - kj.at(b, a)));
      }
    ++r.instances;
  }
  r.seconds = timer.seconds();
  return r;
}

CheckResult joint_enumeration_suite(std::size_t instances, std::uint64_t seed) {
  Timer timer;
  Rng rng(seed);
  CheckResult r{"joint additivity", 0, 0.0, 1e-12};
  for (std::size_t i = 0; i < instances; ++i) {
    const auto ids = agent_ids(pick(rng, 0, 4));
    const std::size_t A = pick(rng, 2, 6);
    const auto t = random_tables(rng, ids, A, pick(rng, 1, 5));
    osbg::JointAgentAction a;
    for (AgentId id : ids) a.set(id, int(pick(rng, 0, A - 1)));
    r.worst = std::max(r.worst, relative(gpl::joint_q(t, a), enumerate_joint(t, a)));
    // Ordered pairs count every unordered pair twice.
    double single = 0.0, unordered = 0.0;
    for (std::size_t j = 0; j < ids.size(); ++j) {
      single += t.singular.at(j, std::size_t(a.at(ids[j])));
      for (std::size_t k = j + 1; k < ids.size(); ++k) unordered += t.pairwise(ids[j], ids[k], a.at(ids[j]), a.at(ids[k]));
    }
    r.worst = std::max(r.worst, relative(gpl::joint_q(t, a), single + 2.0 * unordered));
    ++r.instances;
  }
  r.seconds = timer.seconds();
  return r;
}

CheckResult spi_limit_suite(std::size_t instances, std::uint64_t seed) {
  Timer timer;
  Rng rng(seed);
  CheckResult r{"spi limit", 0, 0.0, 1e-3};
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t A = pick(rng, 2, 8);
    std::vector<double> q(A);
    for (double& v : q) v = std::uniform_real_distribution<double>(-10.0, 10.0)(rng);
    const double reward = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    const double yq = gpl::td_target(reward, q, gpl::TargetMode::q_learning, 0.99, 1e-6);
    const double ys = gpl::td_target(reward, q, gpl::TargetMode::spi, 0.99, 1e-6);
    r.worst = std::max(r.worst, std::abs(ys - yq) / (1.0 + std::abs(yq)));
    ++r.instances;
  }
  r.seconds = timer.seconds();
  return r;
}

CheckResult spi_uniform_suite(std::size_t instances, std::uint64_t seed) {
  Timer timer;
  Rng rng(seed);
  CheckResult r{"spi uniform", 0, 0.0, 1e-9};
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t A = pick(rng, 2, 8);
    const double v = std::uniform_real_distribution<double>(-10.0, 10.0)(rng);
    const double tau = std::uniform_real_distribution<double>(1e-6, 10.0)(rng);
    for (double p : gpl::spi_policy(std::vector<double>(A, v), tau))
      r.worst = std::max(r.worst, std::abs(p - 1.0 / double(A)));
    ++r.instances;
  }
  r.seconds = timer.seconds();
  return r;
}

FdResult param_grad_check(const LossFn& loss, const nn::ParamStore& params, double eps, double tol) {
  nn::GradMap analytic;
  {
    Tape tape;
    nn::BoundParams bound(tape, params, true);
    analytic = bound.grads(tape.backward(loss(bound)));
  }
  auto value = [&](const nn::ParamStore& p) {
    Tape tape;
    nn::BoundParams bound(tape, p, false);
    return loss(bound).value().item();
  };
  FdResult out;
  nn::ParamStore probe = params;
  const double f0 = value(params);
  for (auto& e : probe.entries()) {
    const Tensor& g = analytic.at(e.name);
    for (std::size_t i = 0; i < e.value.numel(); ++i) {
      const double x0 = e.value[i];
      e.value[i] = x0 + eps;
      const double up = value(probe);
      e.value[i] = x0 - eps;
      const double down = value(probe);
      e.value[i] = x0;
      const double a = g[i];
      double err = relative(a, (up - down) / (2.0 * eps));
      if (err > tol) {
        const double right = (up - f0) / eps, left = (f0 - down) / eps;
        if (relative(left, right) > tol) {
          err = std::min(relative(a, left), relative(a, right));
          ++out.kinks;
        }
      }
      out.worst = std::max(out.worst, err);
    }
  }
  return out;
}

std::vector<CheckResult> gradient_suite(std::size_t instances, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CheckResult> out;

  out.push_back(gradient_block("mlp", instances, rng, [](Rng& rng, nn::ParamStore& params) -> LossFn {
    const auto spec = nn::MlpSpec::with_linear_output({pick(rng, 1, 5), pick(rng, 1, 6), pick(rng, 1, 6), pick(rng, 1, 4)},
                                                      pick(rng, 0, 1) ? nn::Activation::relu : nn::Activation::leaky_relu);
    nn::init_mlp(params, "m", spec, rng);
    const Tensor x = uniform(rng, {pick(rng, 1, 4), spec.in()});
    const Tensor w = uniform(rng, {x.shape()[0], spec.out()});
    return [=](const nn::BoundParams& p) {
      Var out = nn::mlp_forward(p, "m", spec, p.tape().constant(x));
      return tensor::sum(out * p.tape().constant(w));
    };
  }));

  out.push_back(gradient_block("lstm", instances, rng, [](Rng& rng, nn::ParamStore& params) -> LossFn {
    const nn::LstmSpec spec{pick(rng, 1, 4), pick(rng, 1, 4)};
    nn::init_lstm(params, "l", spec, rng);
    const std::size_t n = pick(rng, 1, 3);
    const Tensor x1 = uniform(rng, {n, spec.input}), x2 = uniform(rng, {n, spec.input});
    const Tensor h0 = uniform(rng, {n, spec.hidden}), c0 = uniform(rng, {n, spec.hidden});
    const Tensor wh = uniform(rng, {n, spec.hidden}), wc = uniform(rng, {n, spec.hidden});
    return [=](const nn::BoundParams& p) {
      Tape& t = p.tape();
      auto [h1, c1] = nn::lstm_step(p, "l", spec, t.constant(x1), t.constant(h0), t.constant(c0));
      auto [h2, c2] = nn::lstm_step(p, "l", spec, t.constant(x2), h1, c1);
      return tensor::sum(h2 * t.constant(wh)) + tensor::sum(c2 * t.constant(wc));
    };
  }));

  out.push_back(gradient_block("graph block", instances, rng, [](Rng& rng, nn::ParamStore& params) -> LossFn {
    const std::size_t d = pick(rng, 1, 4), e = pick(rng, 1, 4);
    const nn::GraphBlockSpec spec{d, nn::MlpSpec::with_linear_output({2 * d, pick(rng, 1, 4), e}, nn::Activation::leaky_relu),
                                  nn::MlpSpec::with_linear_output({d + e, pick(rng, 1, 4)}, nn::Activation::leaky_relu)};
    nn::init_graph_block(params, "g", spec, rng);
    const auto groups = random_groups(rng);
    const Tensor x = uniform(rng, {groups.rows(), d});
    const Tensor w = uniform(rng, {groups.rows(), spec.node.out()});
    return [=](const nn::BoundParams& p) {
      Var out = nn::graph_block(p, "g", spec, p.tape().constant(x), groups.offsets);
      return tensor::sum(out * p.tape().constant(w));
    };
  }));

  out.push_back(gradient_block("type embedding", instances, rng, [](Rng& rng, nn::ParamStore& params) -> LossFn {
    const auto spec = tiny_gpl(rng);
    params = gpl::init_value_params(spec, rng);
    const std::size_t n = pick(rng, 1, 4);
    const Tensor x = uniform(rng, {n, spec.input}), h = uniform(rng, {n, spec.lstm}), c = uniform(rng, {n, spec.lstm});
    const Tensor w = uniform(rng, {n, spec.lstm});
    return [=](const nn::BoundParams& p) {
      Tape& t = p.tape();
      auto r = gpl::embed_types(p, spec, gpl::kValuePrefix, t.constant(x), t.constant(h), t.constant(c));
      return tensor::sum(r.h * t.constant(w)) + tensor::sum(r.c * t.constant(w));
    };
  }));

  out.push_back(gradient_block("utilities", instances, rng, [](Rng& rng, nn::ParamStore& params) -> LossFn {
    const auto spec = tiny_gpl(rng);
    params = gpl::init_value_params(spec, rng);
    const auto groups = random_groups(rng);
    const Tensor emb = uniform(rng, {groups.rows(), spec.lstm});
    const Tensor ws = uniform(rng, {groups.rows(), spec.actions}), wf = uniform(rng, {groups.rows(), spec.rank * spec.actions});
    return [=](const nn::BoundParams& p) {
      Tape& t = p.tape();
      auto u = gpl::compute_utilities(p, spec, t.constant(emb), groups);
      return tensor::sum(u.singular * t.constant(ws)) + tensor::sum(u.factors * t.constant(wf));
    };
  }));

  out.push_back(gradient_block("agent model", instances, rng, [](Rng& rng, nn::ParamStore& params) -> LossFn {
    const auto spec = tiny_gpl(rng);
    params = gpl::init_model_params(spec, rng);
    const auto groups = random_groups(rng);
    const Tensor emb = uniform(rng, {groups.rows(), spec.lstm});
    const Tensor w = uniform(rng, {groups.rows(), spec.actions});
    return [=](const nn::BoundParams& p) {
      Var probs = gpl::teammate_probs(p, spec, p.tape().constant(emb), groups);
      return tensor::sum(probs * p.tape().constant(w));
    };
  }));

  out.push_back(gradient_block("value loss", instances, rng, [](Rng& rng, nn::ParamStore& params) -> LossFn {
    const auto spec = tiny_gpl(rng);
    params = gpl::init_value_params(spec, rng);
    const auto groups = random_groups(rng, 3, 4);
    const Tensor x = uniform(rng, {groups.rows(), spec.input});
    const Tensor h = uniform(rng, {groups.rows(), spec.lstm}), c = uniform(rng, {groups.rows(), spec.lstm});
    std::vector<int> acts(groups.rows());
    for (int& a : acts) a = int(pick(rng, 0, spec.actions - 1));
    std::vector<double> y(groups.count());
    for (double& v : y) v = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    return [=](const nn::BoundParams& p) {
      Tape& t = p.tape();
      auto r = gpl::embed_types(p, spec, gpl::kValuePrefix, t.constant(x), t.constant(h), t.constant(c));
      auto u = gpl::compute_utilities(p, spec, r.h, groups);
      return gpl::tape::value_loss(gpl::tape::joint_q(u.singular, u.factors, spec.rank, spec.actions, acts, groups.offsets), y);
    };
  }));

  out.push_back(gradient_block("agent model loss", instances, rng, [](Rng& rng, nn::ParamStore& params) -> LossFn {
    const auto spec = tiny_gpl(rng);
    params = gpl::init_model_params(spec, rng);
    gpl::Groups groups;
    const std::size_t count = pick(rng, 1, 3);
    for (std::size_t k = 0; k < count; ++k) groups.add(agent_ids(pick(rng, 1, 3)));
    const Tensor x = uniform(rng, {groups.rows(), spec.input});
    const Tensor h = uniform(rng, {groups.rows(), spec.lstm}), c = uniform(rng, {groups.rows(), spec.lstm});
    std::vector<std::size_t> rows;
    std::vector<int> acts;
    for (std::size_t g = 0; g < groups.count(); ++g)
      for (std::size_t r = groups.offsets[g] + 1; r < groups.offsets[g + 1]; ++r) {
        rows.push_back(r);
        acts.push_back(int(pick(rng, 0, spec.actions - 1)));
      }
    return [=](const nn::BoundParams& p) {
      Tape& t = p.tape();
      auto r = gpl::embed_types(p, spec, gpl::kModelPrefix, t.constant(x), t.constant(h), t.constant(c));
      return gpl::tape::agent_model_loss(gpl::teammate_probs(p, spec, r.h, groups), rows, acts);
    };
  }));

  out.push_back(gradient_block("padded baseline", instances, rng, [](Rng& rng, nn::ParamStore& params) -> LossFn {
    gpl::QlSpec spec;
    spec.input = pick(rng, 2, 6);
    spec.actions = pick(rng, 2, 5);
    spec.embed_hidden = {pick(rng, 2, 4), pick(rng, 2, 4)};
    spec.lstm = pick(rng, 2, 4);
    spec.head_hidden = {pick(rng, 2, 4)};
    params = gpl::init_ql_params(spec, rng);
    const std::size_t n = pick(rng, 1, 3);
    const Tensor x1 = uniform(rng, {n, spec.input}), x2 = uniform(rng, {n, spec.input});
    std::vector<std::size_t> picks(n);
    for (std::size_t i = 0; i < n; ++i) picks[i] = i * spec.actions + pick(rng, 0, spec.actions - 1);
    std::vector<double> y(n);
    for (double& v : y) v = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    return [=](const nn::BoundParams& p) {
      Tape& t = p.tape();
      const Tensor zero({n, spec.lstm});
      auto s1 = gpl::ql_forward(p, spec, t.constant(x1), t.constant(zero), t.constant(zero));
      auto s2 = gpl::ql_forward(p, spec, t.constant(x2), s1.h, s1.c);
      Var taken = tensor::select_rows(tensor::reshape(s2.q, {n * spec.actions}), picks);
      return gpl::tape::value_loss(taken, y);
    };
  }));

  return out;
}

}  // namespace openteam::verify
