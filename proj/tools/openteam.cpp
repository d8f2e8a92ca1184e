#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <optional>

#include "openteam/harness/analysis.hpp"
#include "openteam/harness/run.hpp"
#include "openteam/verify/suites.hpp"

namespace {

using namespace openteam;

constexpr int kOk = 0, kRuntime = 1, kUsage = 2;

void report(const verify::CheckResult& r) {
  fmt::print("{:<28} {} instances={} worst={:.3e} tol={:.0e} kinks={} {:.2f}s\n", r.name, r.pass() ? "PASS" : "FAIL",
             r.instances, r.worst, r.tolerance, r.kinks, r.seconds);
}

struct Options {
  std::string config, checkpoint, out;
  std::optional<std::uint64_t> seed;
  std::size_t episodes = 100;
  std::optional<int> team_limit;
  std::size_t analysis_episodes = 20;
  bool random = false;
  bool literal = false;
  std::size_t grad_instances = 20;
  std::size_t oracle_instances = 1000;
};

harness::RunConfig load_config(const Options& o) {
  auto cfg = harness::RunConfig::load(o.config);
  if (o.seed) cfg.train.seed = *o.seed;
  if (!o.out.empty()) cfg.output_dir = o.out;
  cfg.validate();
  return cfg;
}

int cmd_train(const Options& o) {
  const auto cfg = load_config(o);
  const auto dir = harness::run_training(cfg);
  fmt::print("{}\n", dir.string());
  return kOk;
}

int cmd_eval(const Options& o) {
  const auto cfg = load_config(o);
  harness::EvalRequest req{o.episodes, o.seed.value_or(1), o.team_limit};
  harness::MetricRecord m;
  if (o.random) {
    m = harness::evaluate_random(cfg, req);
  } else {
    if (o.checkpoint.empty()) throw harness::ConfigError("--checkpoint is required unless --random is given");
    m = harness::evaluate(harness::load_checkpoint(o.checkpoint), cfg, req);
  }
  std::cout << m.to_json().dump() << "\n";
  return kOk;
}

int cmd_analyze(const Options& o) {
  const auto cfg = load_config(o);
  harness::AnalysisRequest req{o.analysis_episodes, o.seed.value_or(1), o.literal};
  const auto table = harness::analyze_pairwise(harness::load_checkpoint(o.checkpoint), cfg, req);
  std::ofstream out(o.out);
  if (!out) throw std::runtime_error("cannot write " + o.out);
  out << table.dump() << "\n";
  std::cout << table["pearson"].dump() << "\n";
  return kOk;
}

int cmd_gradcheck(const Options& o) {
  bool ok = true;
  for (const auto& r : verify::gradient_suite(o.grad_instances, o.seed.value_or(1))) {
    report(r);
    ok = ok && r.pass();
  }
  return ok ? kOk : kRuntime;
}

int cmd_oracle(const Options& o) {
  const auto r = verify::marginal_oracle_suite(o.oracle_instances, o.seed.value_or(1));
  report(r);
  return r.pass() ? kOk : kRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open ad hoc teamwork with graph-based policy learning"};
  app.require_subcommand(1);
  Options o;
  auto seed = [&](CLI::App* c, const char* what) {
    c->add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { o.seed = s; }, what);
  };

  auto* train = app.add_subcommand("train", "train a learner and write a run directory");
  train->add_option("--config", o.config, "run config JSON")->required()->check(CLI::ExistingFile);
  seed(train, "overrides the config seed");
  train->add_option("--out", o.out, "run directory (overrides output_dir)");

  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint under the eval openness process");
  eval->add_option("--checkpoint", o.checkpoint, "checkpoint directory");
  eval->add_option("--config", o.config, "run config JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--episodes", o.episodes, "episodes to run")->capture_default_str();
  eval->add_option_function<int>("--team-limit", [&](int n) { o.team_limit = n; }, "override the team limit");
  seed(eval, "evaluation seed (default 1)");
  eval->add_flag("--random", o.random, "evaluate the uniform random policy instead");

  auto* analyze = app.add_subcommand("analyze", "pairwise utility analysis of a GPL checkpoint");
  analyze->add_option("--checkpoint", o.checkpoint, "checkpoint directory")->required()->check(CLI::ExistingDirectory);
  analyze->add_option("--config", o.config, "run config JSON")->required()->check(CLI::ExistingFile);
  analyze->add_option("--out", o.out, "output JSON")->required();
  analyze->add_option("--episodes", o.analysis_episodes, "greedy episodes")->capture_default_str();
  seed(analyze, "rollout seed (default 1)");
  analyze->add_flag("--literal", o.literal, "only average cells differing in both actions");

  auto* grad = app.add_subcommand("gradcheck", "finite-difference check of every block and loss");
  grad->add_option("--instances", o.grad_instances, "instances per block")->capture_default_str();
  seed(grad, "suite seed (default 1)");

  auto* oracle = app.add_subcommand("oracle", "marginal value against brute-force enumeration");
  oracle->add_option("--instances", o.oracle_instances, "random instances")->capture_default_str();
  seed(oracle, "suite seed (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*train) return cmd_train(o);
    if (*eval) return cmd_eval(o);
    if (*analyze) return cmd_analyze(o);
    if (*grad) return cmd_gradcheck(o);
    return cmd_oracle(o);
  } catch (const harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
}
