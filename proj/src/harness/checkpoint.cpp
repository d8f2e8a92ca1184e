#include "openteam/harness/checkpoint.hpp"

#include <fmt/format.h>

#include <bit>
#include <fstream>
#include <map>

namespace openteam::harness {
namespace {

constexpr const char* kGroups[] = {"value", "model", "target"};

std::string shape_text(const tensor::Shape& s) { return tensor::shape_str(s); }

nn::ParamStore& group(Checkpoint& ck, int g) { return g == 0 ? ck.value : g == 1 ? ck.model : ck.target; }
const nn::ParamStore& group(const Checkpoint& ck, int g) { return g == 0 ? ck.value : g == 1 ? ck.model : ck.target; }

// The layouts a freshly initialized learner would have.
Checkpoint expected_layout(const RunConfig& cfg) {
  gpl::Learner fresh(cfg.train.learner, 0);
  Checkpoint ck;
  ck.value = fresh.value_params();
  ck.model = fresh.model_params();
  ck.target = fresh.target_params();
  return ck;
}

}  // namespace

Checkpoint make_checkpoint(const RunConfig& cfg, std::uint64_t step, const gpl::Learner& learner) {
  Checkpoint ck;
  ck.config_hash = cfg.hash();
  ck.step = step;
  ck.config = cfg.to_json();
  ck.config.erase("output_dir");
  ck.value = learner.value_params();
  ck.model = learner.model_params();
  ck.target = learner.target_params();
  return ck;
}

std::string layout_diff(const nn::ParamStore& expected, const nn::ParamStore& actual) {
  std::string out;
  std::map<std::string, tensor::Shape> have;
  for (const auto& e : actual.entries()) have[e.name] = e.value.shape();
  for (const auto& e : expected.entries()) {
    auto it = have.find(e.name);
    if (it == have.end()) {
      out += fmt::format("  missing {} {}\n", e.name, shape_text(e.value.shape()));
    } else {
      if (it->second != e.value.shape())
        out += fmt::format("  {}: expected {} got {}\n", e.name, shape_text(e.value.shape()), shape_text(it->second));
      have.erase(it);
    }
  }
  for (const auto& [name, shape] : have) out += fmt::format("  unexpected {} {}\n", name, shape_text(shape));
  if (out.empty() && !expected.same_layout(actual)) out = "  entries are in a different order\n";
  return out;
}

void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& ck) {
  std::filesystem::create_directories(dir);
  Json manifest{{"format", 1}, {"config_hash", ck.config_hash}, {"step", ck.step}, {"config", ck.config}};
  std::ofstream bin(dir / "params.bin", std::ios::binary);
  if (!bin) throw CheckpointError("cannot write " + (dir / "params.bin").string());
  for (int g = 0; g < 3; ++g) {
    Json entries = Json::array();
    for (const auto& e : group(ck, g).entries()) {
      entries.push_back({{"name", e.name}, {"shape", e.value.shape()}});
      for (double v : e.value.data()) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        char bytes[8];
        for (int b = 0; b < 8; ++b) bytes[b] = char((bits >> (8 * b)) & 0xff);
        bin.write(bytes, 8);
      }
    }
    manifest["params"][kGroups[g]] = entries;
  }
  if (!bin) throw CheckpointError("failed writing " + (dir / "params.bin").string());
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << "\n";
  if (!out) throw CheckpointError("failed writing " + (dir / "manifest.json").string());
}

Checkpoint load_checkpoint(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw CheckpointError("no manifest in " + dir.string());
  Json manifest;
  try {
    manifest = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw CheckpointError(std::string("corrupt manifest: ") + e.what());
  }
  Checkpoint ck;
  std::vector<std::vector<std::pair<std::string, tensor::Shape>>> layout(3);
  std::size_t total = 0;
  try {
    if (manifest.at("format").get<int>() != 1) throw CheckpointError("unsupported checkpoint format");
    ck.config_hash = manifest.at("config_hash").get<std::string>();
    ck.step = manifest.at("step").get<std::uint64_t>();
    ck.config = manifest.at("config");
    for (int g = 0; g < 3; ++g)
      for (const auto& e : manifest.at("params").at(kGroups[g])) {
        auto shape = e.at("shape").get<tensor::Shape>();
        total += tensor::shape_numel(shape);
        layout[g].emplace_back(e.at("name").get<std::string>(), std::move(shape));
      }
  } catch (const Json::exception& e) {
    throw CheckpointError(std::string("corrupt manifest: ") + e.what());
  }

  std::ifstream bin(dir / "params.bin", std::ios::binary | std::ios::ate);
  if (!bin) throw CheckpointError("no parameter payload in " + dir.string());
  const auto bytes = std::uint64_t(bin.tellg());
  if (bytes != total * 8)
    throw CheckpointError(fmt::format("parameter payload holds {} bytes, manifest needs {}", bytes, total * 8));
  bin.seekg(0);
  for (int g = 0; g < 3; ++g)
    for (auto& [name, shape] : layout[g]) {
      tensor::Tensor t(shape);
      for (double& v : t.data()) {
        unsigned char b[8];
        bin.read(reinterpret_cast<char*>(b), 8);
        std::uint64_t bits = 0;
        for (int k = 0; k < 8; ++k) bits |= std::uint64_t(b[k]) << (8 * k);
        v = std::bit_cast<double>(bits);
      }
      group(ck, g).add(name, std::move(t));
    }

  RunConfig cfg;
  try {
    cfg = RunConfig::from_json(ck.config);
  } catch (const ConfigError& e) {
    throw CheckpointError(std::string("checkpoint config is invalid: ") + e.what());
  }
  const Checkpoint want = expected_layout(cfg);
  std::string diff;
  for (int g = 0; g < 3; ++g) {
    const std::string d = layout_diff(group(want, g), group(ck, g));
    if (!d.empty()) diff += fmt::format(" {}:\n{}", kGroups[g], d);
  }
  if (!diff.empty()) throw CheckpointError("checkpoint shapes do not match its config:\n" + diff);
  return ck;
}

std::unique_ptr<gpl::Learner> restore_learner(const Checkpoint& ck, const RunConfig& cfg, std::uint64_t seed) {
  const Checkpoint want = expected_layout(cfg);
  std::string diff;
  for (int g = 0; g < 3; ++g) {
    const std::string d = layout_diff(group(want, g), group(ck, g));
    if (!d.empty()) diff += fmt::format(" {}:\n{}", kGroups[g], d);
  }
  if (!diff.empty()) throw CheckpointError("checkpoint does not fit the configured network:\n" + diff);
  return std::make_unique<gpl::Learner>(cfg.train.learner, ck.value, ck.model, ck.target, seed);
}

}  // namespace openteam::harness
