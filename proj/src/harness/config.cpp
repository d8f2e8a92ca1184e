#include "openteam/harness/config.hpp"

#include <fmt/format.h>

#include <fstream>
#include <set>

namespace openteam::harness {
namespace {

using teammates::EnvKind;

// Reads `key` from `j` into `out` when present and records it as known.
class Reader {
 public:
  Reader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + " must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    known_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const Json::exception&) {
      throw ConfigError(where_ + "." + key + " has the wrong type");
    }
  }

  const Json* child(const char* key) {
    known_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& [k, _] : j_.items())
      if (!known_.count(k)) throw ConfigError("unknown key " + where_ + "." + k);
  }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> known_;
};

void read_range(Reader& r, const char* key, osbg::DurationRange& out, const std::string& where) {
  std::vector<int> v{out.lo, out.hi};
  r.get(key, v);
  if (v.size() != 2) throw ConfigError(where + "." + key + " must be [lo, hi]");
  out = {v[0], v[1]};
}

osbg::OpennessConfig read_openness(const Json& j, osbg::OpennessConfig base, const std::string& where) {
  Reader r(j, where);
  read_range(r, "active", base.active, where);
  read_range(r, "waiting", base.waiting, where);
  r.get("team_limit", base.team_limit);
  r.get("population", base.population);
  r.get("type_pool", base.type_pool);
  r.finish();
  return base;
}

Json openness_json(const osbg::OpennessConfig& o) {
  return {{"active", {o.active.lo, o.active.hi}},
          {"waiting", {o.waiting.lo, o.waiting.hi}},
          {"team_limit", o.team_limit},
          {"population", o.population},
          {"type_pool", o.type_pool}};
}

}  // namespace

osbg::OpennessConfig default_openness(EnvKind env) {
  osbg::OpennessConfig o;
  if (env == EnvKind::lbf) {
    o.active = {15, 25};
    o.waiting = {10, 20};
  } else {
    o.active = {25, 35};
    o.waiting = {15, 25};
  }
  o.type_pool = teammates::all_types(env);
  return o;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

RunConfig RunConfig::from_json(const Json& j) {
  RunConfig cfg;
  auto& t = cfg.train;
  Reader r(j, "config");
  std::string env = "wolfpack";
  r.get("env", env);
  if (env == "wolfpack") t.game.env = EnvKind::wolfpack;
  else if (env == "lbf") t.game.env = EnvKind::lbf;
  else throw ConfigError("config.env must be \"wolfpack\" or \"lbf\"");

  if (const Json* w = r.child("wolfpack")) {
    Reader wr(*w, "wolfpack");
    wr.get("size", t.game.wolf.size);
    wr.get("prey", t.game.wolf.prey);
    wr.get("horizon", t.game.wolf.horizon);
    wr.get("capture_reward_per_hunter", t.game.wolf.capture_reward_per_hunter);
    wr.get("lone_penalty", t.game.wolf.lone_penalty);
    wr.finish();
  }
  if (const Json* l = r.child("lbf")) {
    Reader lr(*l, "lbf");
    lr.get("size", t.game.lbf.size);
    lr.get("objects", t.game.lbf.objects);
    lr.get("max_level", t.game.lbf.max_level);
    lr.get("horizon", t.game.lbf.horizon);
    lr.finish();
  }

  t.game.openness = default_openness(t.game.env);
  bool eval_given = false;
  if (const Json* o = r.child("openness")) {
    Reader orr(*o, "openness");
    if (const Json* tr = orr.child("train")) t.game.openness = read_openness(*tr, t.game.openness, "openness.train");
    cfg.eval_openness = t.game.openness;
    if (const Json* ev = orr.child("eval")) {
      cfg.eval_openness = read_openness(*ev, t.game.openness, "openness.eval");
      eval_given = true;
    }
    orr.finish();
  }
  if (!eval_given) cfg.eval_openness = t.game.openness;

  std::string algo = "GPL-Q";
  r.get("algorithm", algo);
  try {
    t.learner.algorithm = gpl::parse_algorithm(algo);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (const Json* n = r.child("network")) {
    Reader nr(*n, "network");
    auto& w = t.learner.widths;
    nr.get("embed_hidden", w.embed_hidden);
    nr.get("lstm", w.lstm);
    nr.get("beta_hidden", w.beta_hidden);
    nr.get("delta_hidden", w.delta_hidden);
    nr.get("rank", w.rank);
    nr.get("edge_out", w.edge_out);
    nr.get("node_out", w.node_out);
    nr.get("eta_hidden", w.eta_hidden);
    nr.get("max_agents", t.learner.max_agents);
    nr.finish();
  }
  r.get("gamma", t.learner.gamma);
  r.get("tau", t.learner.tau);
  r.get("lr", t.learner.adam.lr);
  if (const Json* e = r.child("epsilon")) {
    Reader er(*e, "epsilon");
    er.get("start", t.eps_start);
    er.get("end", t.eps_end);
    er.get("fraction", t.eps_fraction);
    er.finish();
  }
  r.get("envs", t.envs);
  r.get("total_steps", t.total_steps);
  r.get("checkpoint_interval", t.checkpoint_interval);
  r.get("update_every", t.update_every);
  r.get("polyak", t.polyak);
  r.get("seed", t.seed);
  r.get("output_dir", cfg.output_dir);
  r.finish();

  try {
    const auto dims = gpl::observation_dims(t.game);
    t.learner.x_dim = dims.x_dim;
    t.learner.u_dim = dims.u_dim;
    t.learner.actions = dims.actions;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

Json RunConfig::to_json() const {
  const auto& t = train;
  const auto& w = t.learner.widths;
  return {
      {"env", t.game.env == EnvKind::lbf ? "lbf" : "wolfpack"},
      {"wolfpack",
       {{"size", t.game.wolf.size},
        {"prey", t.game.wolf.prey},
        {"horizon", t.game.wolf.horizon},
        {"capture_reward_per_hunter", t.game.wolf.capture_reward_per_hunter},
        {"lone_penalty", t.game.wolf.lone_penalty}}},
      {"lbf",
       {{"size", t.game.lbf.size},
        {"objects", t.game.lbf.objects},
        {"max_level", t.game.lbf.max_level},
        {"horizon", t.game.lbf.horizon}}},
      {"openness", {{"train", openness_json(t.game.openness)}, {"eval", openness_json(eval_openness)}}},
      {"algorithm", gpl::algorithm_name(t.learner.algorithm)},
      {"network",
       {{"embed_hidden", w.embed_hidden},
        {"lstm", w.lstm},
        {"beta_hidden", w.beta_hidden},
        {"delta_hidden", w.delta_hidden},
        {"rank", w.rank},
        {"edge_out", w.edge_out},
        {"node_out", w.node_out},
        {"eta_hidden", w.eta_hidden},
        {"max_agents", t.learner.max_agents}}},
      {"gamma", t.learner.gamma},
      {"tau", t.learner.tau},
      {"lr", t.learner.adam.lr},
      {"epsilon", {{"start", t.eps_start}, {"end", t.eps_end}, {"fraction", t.eps_fraction}}},
      {"envs", t.envs},
      {"total_steps", t.total_steps},
      {"checkpoint_interval", t.checkpoint_interval},
      {"update_every", t.update_every},
      {"polyak", t.polyak},
      {"seed", t.seed},
      {"output_dir", output_dir},
  };
}

world::GameConfig RunConfig::eval_game() const {
  world::GameConfig g = train.game;
  g.openness = eval_openness;
  return g;
}

void RunConfig::validate() const {
  try {
    train.validate();
    eval_game().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (const auto& [name, w] : {std::pair{"network.embed_hidden", &train.learner.widths.embed_hidden},
                                std::pair{"network.beta_hidden", &train.learner.widths.beta_hidden},
                                std::pair{"network.delta_hidden", &train.learner.widths.delta_hidden}})
    for (std::size_t v : *w)
      if (v == 0) throw ConfigError(fmt::format("{} has a zero width", name));
  if (!(train.learner.adam.lr >= 0.0)) throw ConfigError("lr must be nonnegative");
}

std::string RunConfig::hash() const {
  Json j = to_json();
  j.erase("output_dir");
  j.erase("seed");
  return fmt::format("{:016x}", fnv1a(j.dump()));
}

}  // namespace openteam::harness
