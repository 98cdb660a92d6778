// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/checkpoint.h"

#include <fstream>

#include "discogan/errors.h"
#include "discogan/random.h"

namespace discogan {

namespace fs = std::filesystem;

std::string config_hash(const nlohmann::json& config) { return hex64(fnv1a64(config.dump())); }

void save_module(const torch::nn::Module& module, const fs::path& path) {
  torch::serialize::OutputArchive archive;
  module.save(archive);
  archive.save_to(path.string());
}

void load_module(torch::nn::Module& module, const fs::path& path) {
  if (!fs::exists(path)) throw InvalidInput("missing weights file " + path.string());
  torch::serialize::InputArchive archive;
  archive.load_from(path.string());
  torch::NoGradGuard no_grad;
  module.load(archive);
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw RuntimeFailure("failed writing " + path.string());
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_checkpoint_meta(const fs::path& dir, const std::string& kind,
                           const nlohmann::json& config) {
  fs::create_directories(dir);
  write_json(dir / "config.json", config);
  write_json(dir / "meta.json", {{"format_version", kCheckpointFormatVersion},
                                 {"kind", kind},
                                 {"config_hash", config_hash(config)}});
}

nlohmann::json read_checkpoint_config(const fs::path& dir, const std::string& kind) {
  if (!fs::is_directory(dir)) throw InvalidInput("checkpoint directory not found: " + dir.string());
  const auto meta = read_json(dir / "meta.json");
  if (meta.value("format_version", -1) != kCheckpointFormatVersion) {
    throw InvalidInput("checkpoint " + dir.string() + " has an unsupported format version");
  }
  if (meta.value("kind", std::string()) != kind) {
    throw InvalidInput("checkpoint " + dir.string() + " holds '" +
                       meta.value("kind", std::string()) + "', expected '" + kind + "'");
  }
  auto config = read_json(dir / "config.json");
  if (meta.value("config_hash", std::string()) != config_hash(config)) {
    throw InvalidInput("checkpoint " + dir.string() + ": config.json does not match its hash");
  }
  return config;
}

void save_disc_model(const fs::path& dir, const DiscModelImpl& model) {
  write_checkpoint_meta(dir, "disc_model", model.config().to_json());
  save_module(model, dir / "model.pt");
}

DiscModelPtr load_disc_model(const fs::path& dir) {
  auto cfg = DiscModelConfig::from_json(read_checkpoint_config(dir, "disc_model"));
  auto model = make_disc_model(cfg);
  load_module(*model, dir / "model.pt");
  model->eval();
  return model;
}

void save_generator(const fs::path& dir, const GeneratorImpl& gen) {
  write_checkpoint_meta(dir, "generator", gen.config().to_json());
  save_module(gen, dir / "generator.pt");
}

Generator load_generator(const fs::path& dir) {
  auto cfg = GeneratorConfig::from_json(read_checkpoint_config(dir, "generator"));
  Generator gen(cfg);
  load_module(*gen, dir / "generator.pt");
  gen->eval();
  return gen;
}

std::vector<torch::Tensor> snapshot_parameters(const torch::nn::Module& module) {
  std::vector<torch::Tensor> out;
  for (const auto& p : module.parameters()) out.push_back(p.detach().clone());
  return out;
}

bool bit_identical(const std::vector<torch::Tensor>& a, const std::vector<torch::Tensor>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].sizes() != b[i].sizes() || a[i].scalar_type() != b[i].scalar_type()) return false;
    if (!torch::equal(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace discogan
