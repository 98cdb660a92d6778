// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <torch/torch.h>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "discogan/dataset.h"
#include "discogan/disc_models.h"
#include "discogan/discriminator.h"
#include "discogan/generator.h"
#include "discogan/losses.h"
#include "discogan/random.h"

namespace discogan {

enum class Topology {
  kNoCoGan,      // end-to-end GAN without conditioning
  kE2eDisCoGan,  // conditioning encoder trained jointly from scratch
  kDisCoGan,     // frozen discriminative extractor conditions the generator
  kGanFirst,     // s_hat = F(G(x)), F fine-tuned on the frozen GAN output
  kGanLast,      // s_hat = G(F(x)), F frozen
  kDisCoGanD,    // DisCoGAN trained with the reconstruction loss only
  kNoCoGanD,     // NoCoGAN trained with the reconstruction loss only
};

std::string to_string(Topology t);
Topology topology_from_string(const std::string& name);
std::vector<Topology> all_topologies();

bool uses_discriminator(Topology t);
bool is_conditioned(Topology t);
bool requires_checkpoint(Topology t);

enum class Scale { kPaper, kDesk };
std::string to_string(Scale s);
Scale scale_from_string(const std::string& name);

struct OptimizerSpec {
  double lr = 3e-4;
  double beta1 = 0.5;
  double beta2 = 0.9;
  double weight_decay = 0.0;

  nlohmann::json to_json() const;
  static OptimizerSpec from_json(const nlohmann::json& j, OptimizerSpec base);
  bool operator==(const OptimizerSpec&) const = default;
};

struct ExperimentConfig {
  Topology topology = Topology::kDisCoGan;
  std::optional<std::string> conditioning_checkpoint;
  int batch_size = 4;
  int64_t max_steps = 2000;
  LossWeights weights;
  OptimizerSpec optimizer;
  uint64_t seed = 0;
  Scale scale = Scale::kDesk;
  double segment_seconds = 1.0;
  // Unconditioned base; conditioning is added from the topology.
  GeneratorConfig generator = GeneratorConfig::desk();
  DiscriminatorConfig discriminator = DiscriminatorConfig::desk();
  std::vector<int> resolutions{5, 6, 7, 8, 9, 10};
  // Conditioning encoder trained jointly by E2E_DISCOGAN.
  DiscModelConfig e2e_encoder = DiscModelConfig::desk(DiscModelKind::kGcrn);
  // GAN_FIRST second stage.
  int64_t stage2_steps = 200;
  OptimizerSpec stage2_optimizer{1e-3, 0.9, 0.999, 0.0};
  // Single intra-op thread for bit-reproducible runs.
  bool deterministic = true;
  // Write the resumable state every N steps (0: only at the end).
  int64_t checkpoint_every = 0;

  void validate() const;
  int64_t segment_samples() const;
  // Reconstruction-only variants zero the adversarial weights.
  LossWeights effective_weights() const;
  SpectralResolutionSet resolution_set() const;

  nlohmann::json to_json() const;
  // Missing keys fall back to the preset named by "scale" and "topology".
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig preset(Scale scale, Topology topology);
};

// Rendered training pairs held in memory.
struct Batch {
  torch::Tensor mixture;  // [B, N]
  torch::Tensor clean;    // [B, N]
};

class TrainingData {
 public:
  TrainingData() = default;
  explicit TrainingData(std::vector<RenderedItem> items);
  static TrainingData from_manifest(const std::vector<ManifestRow>& rows, int jobs = 1);

  std::size_t size() const { return items_.size(); }
  const RenderedItem& item(std::size_t i) const { return items_.at(i); }
  // Uniform items with uniform crop offsets; short items are zero-padded.
  Batch sample(Rng& rng, int batch_size, int64_t segment) const;

 private:
  std::vector<RenderedItem> items_;
};

// Adam with the given coefficients over the parameters in `params`.
std::unique_ptr<torch::optim::Adam> make_adam(const std::vector<torch::Tensor>& params,
                                              const OptimizerSpec& spec);

// Discriminator update rule: step iff l_d exceeds the unweighted generator
// adversarial loss.
bool discriminator_should_update(double l_d, double l_adv);

struct DiscTrainConfig {
  DiscModelConfig model = DiscModelConfig::desk(DiscModelKind::kGcrn);
  int batch_size = 4;
  int64_t steps = 300;
  double segment_seconds = 1.0;
  OptimizerSpec optimizer{1e-3, 0.9, 0.999, 0.0};
  uint64_t seed = 0;
  bool single_batch = false;
  bool deterministic = true;

  void validate() const;
  nlohmann::json to_json() const;
  static DiscTrainConfig from_json(const nlohmann::json& j);
};

struct DiscTrainResult {
  DiscModelPtr model;
  std::vector<double> losses;
};

// Discriminative pre-training. If out_dir is non-empty the checkpoint and
// loss log are written there. NaN loss -> RuntimeFailure.
DiscTrainResult train_discriminative(const DiscTrainConfig& cfg, const TrainingData& data,
                                     const std::filesystem::path& out_dir = {});

struct GanModels {
  Topology topology = Topology::kNoCoGan;
  Generator generator{nullptr};
  DiscriminatorBank discriminator{nullptr};  // absent for reconstruction-only variants
  DiscModelPtr extractor;                    // frozen, jointly trained or stage-2 model
};

// Instantiates the models of a topology, loading the conditioning checkpoint
// when required and freezing it where the topology says so.
GanModels assemble_topology(const ExperimentConfig& cfg);

struct EnhanceOptions {
  // Signal fed to the conditioning extractor instead of the mixture.
  torch::Tensor conditioning_input;
  // Applied to D_L before conditioning.
  std::function<torch::Tensor(const torch::Tensor&)> latent_transform;
};

// Output the generator is trained on (for GAN_FIRST, the stage-1 output).
torch::Tensor generator_path(GanModels& m, const torch::Tensor& wav,
                             const EnhanceOptions& opts = {});
// Final system output.
torch::Tensor enhance(GanModels& m, const torch::Tensor& wav, const EnhanceOptions& opts = {});

struct TrainState {
  int64_t step = 0;
  int64_t updates_taken = 0;
  int64_t updates_skipped = 0;
  Rng rng;
};

struct LogRow {
  int64_t step = 0;
  LossReport losses;
  bool d_updated = false;
};

std::string log_header();
std::string format_log_row(const LogRow& row);

// Run directory layout:
//   config.json, meta.json      experiment config and its hash
//   generator.pt, discriminator.pt
//   extractor/                  copy of the conditioning model (if any)
//   log.csv, stage2_log.csv
//   state/                      resumable training state
class GanTrainer {
 public:
  // An empty run_dir keeps everything in memory.
  GanTrainer(const ExperimentConfig& cfg, TrainingData data, std::filesystem::path run_dir = {},
             bool single_batch = false);

  LogRow step();
  // Trains up to max_steps (or `steps` more) and returns the new rows.
  std::vector<LogRow> run(std::optional<int64_t> steps = std::nullopt);
  // GAN_FIRST second stage; no-op for the other topologies.
  std::vector<double> train_stage2();
  // Writes weights and config into the run directory.
  void save_run() const;
  void save_state(const std::filesystem::path& dir) const;
  void load_state(const std::filesystem::path& dir);

  GanModels& models() { return models_; }
  const TrainState& state() const { return state_; }
  const ExperimentConfig& config() const { return cfg_; }
  const std::vector<torch::Tensor>& generator_parameters() const { return g_params_; }

 private:
  Batch next_batch();
  void append_log(const LogRow& row) const;

  ExperimentConfig cfg_;
  TrainingData data_;
  std::filesystem::path run_dir_;
  bool single_batch_;
  std::optional<Batch> fixed_batch_;
  GanModels models_;
  std::vector<torch::Tensor> g_params_, d_params_;
  std::unique_ptr<torch::optim::Adam> opt_g_, opt_d_;
  TrainState state_;
};

struct GanTrainResult {
  std::vector<LogRow> log;
  TrainState state;
};

// Full run: GAN steps, GAN_FIRST second stage, run directory.
GanTrainResult train_gan(const ExperimentConfig& cfg, const TrainingData& data,
                         const std::filesystem::path& run_dir);

// Inference wrapper over a trained run, a bare discriminative model or the
// identity.
class Pipeline {
 public:
  static Pipeline identity();
  static Pipeline load(const std::filesystem::path& run_dir);
  static Pipeline from_models(GanModels models);
  static Pipeline from_disc_model(DiscModelPtr model);

  // wav [B, N] -> [B, N]
  torch::Tensor enhance(const torch::Tensor& wav, const EnhanceOptions& opts = {}) const;
  AudioBuffer enhance(const AudioBuffer& audio, const EnhanceOptions& opts = {}) const;

  bool conditioned() const;
  const std::string& name() const { return name_; }
  // Configuration the pipeline was built from (empty object for identity).
  const nlohmann::json& config() const { return config_; }
  std::optional<Topology> topology() const;

 private:
  std::string name_;
  nlohmann::json config_ = nlohmann::json::object();
  std::shared_ptr<GanModels> models_;
  DiscModelPtr disc_;
};

}  // namespace discogan
