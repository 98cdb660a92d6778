// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/training.h"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "discogan/checkpoint.h"
#include "discogan/errors.h"
#include "discogan/layers.h"
#include "discogan/parallel.h"

namespace discogan {

namespace fs = std::filesystem;

std::string to_string(Topology t) {
  switch (t) {
    case Topology::kNoCoGan:
      return "nocogan";
    case Topology::kE2eDisCoGan:
      return "e2e-discogan";
    case Topology::kDisCoGan:
      return "discogan";
    case Topology::kGanFirst:
      return "gan-first";
    case Topology::kGanLast:
      return "gan-last";
    case Topology::kDisCoGanD:
      return "discogan-d";
    case Topology::kNoCoGanD:
      return "nocogan-d";
  }
  return "unknown";
}

Topology topology_from_string(const std::string& raw) {
  std::string name;
  for (char c : raw) name.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(c)));
  if (name == "nocogan" || name == "e2e-gan" || name == "e2e") return Topology::kNoCoGan;
  if (name == "e2e-discogan") return Topology::kE2eDisCoGan;
  if (name == "discogan") return Topology::kDisCoGan;
  if (name == "gan-first") return Topology::kGanFirst;
  if (name == "gan-last") return Topology::kGanLast;
  if (name == "discogan-d") return Topology::kDisCoGanD;
  if (name == "nocogan-d") return Topology::kNoCoGanD;
  throw InvalidConfig("unknown topology '" + raw + "'");
}

std::vector<Topology> all_topologies() {
  return {Topology::kNoCoGan,  Topology::kE2eDisCoGan, Topology::kDisCoGan, Topology::kGanFirst,
          Topology::kGanLast,  Topology::kDisCoGanD,   Topology::kNoCoGanD};
}

bool uses_discriminator(Topology t) {
  return t != Topology::kDisCoGanD && t != Topology::kNoCoGanD;
}

bool is_conditioned(Topology t) {
  return t == Topology::kE2eDisCoGan || t == Topology::kDisCoGan || t == Topology::kDisCoGanD;
}

bool requires_checkpoint(Topology t) {
  return t == Topology::kDisCoGan || t == Topology::kGanFirst || t == Topology::kGanLast ||
         t == Topology::kDisCoGanD;
}

std::string to_string(Scale s) { return s == Scale::kPaper ? "paper" : "desk"; }

Scale scale_from_string(const std::string& name) {
  if (name == "paper") return Scale::kPaper;
  if (name == "desk") return Scale::kDesk;
  throw InvalidConfig("unknown scale '" + name + "' (expected paper or desk)");
}

nlohmann::json OptimizerSpec::to_json() const {
  return {{"lr", lr}, {"beta1", beta1}, {"beta2", beta2}, {"weight_decay", weight_decay}};
}

OptimizerSpec OptimizerSpec::from_json(const nlohmann::json& j, OptimizerSpec base) {
  base.lr = j.value("lr", base.lr);
  base.beta1 = j.value("beta1", base.beta1);
  base.beta2 = j.value("beta2", base.beta2);
  base.weight_decay = j.value("weight_decay", base.weight_decay);
  return base;
}

namespace {

void validate_optimizer(const OptimizerSpec& o, const char* who) {
  if (!(o.lr > 0) || !(o.beta1 >= 0 && o.beta1 < 1) || !(o.beta2 >= 0 && o.beta2 < 1) ||
      !(o.weight_decay >= 0)) {
    throw InvalidConfig(std::string(who) + ": invalid optimizer coefficients");
  }
}

int64_t seconds_to_samples(double seconds) {
  return static_cast<int64_t>(std::llround(seconds * kSampleRate));
}

}  // namespace

void ExperimentConfig::validate() const {
  weights.validate();
  validate_optimizer(optimizer, "optimizer");
  validate_optimizer(stage2_optimizer, "stage2_optimizer");
  if (batch_size < 1) throw InvalidConfig("batch_size must be >= 1");
  if (max_steps < 0 || stage2_steps < 0 || checkpoint_every < 0) {
    throw InvalidConfig("step counts must be non-negative");
  }
  if (generator.conditioning) {
    throw InvalidConfig("generator config must be unconditioned; the topology adds conditioning");
  }
  generator.validate();
  resolution_set().validate();
  const bool e2e = topology == Topology::kNoCoGan || topology == Topology::kE2eDisCoGan ||
                   topology == Topology::kNoCoGanD;
  if (requires_checkpoint(topology) && !conditioning_checkpoint) {
    throw InvalidConfig("topology " + to_string(topology) + " requires conditioning_checkpoint");
  }
  if (e2e && conditioning_checkpoint) {
    throw InvalidConfig("topology " + to_string(topology) +
                        " is trained end to end and takes no conditioning_checkpoint");
  }
  if (topology == Topology::kE2eDisCoGan) e2e_encoder.validate();
  const int64_t n = segment_samples();
  if (n < resolution_set().max_window()) {
    throw InvalidConfig("segment_seconds is shorter than the largest spectral-loss window");
  }
  if (uses_discriminator(topology)) {
    discriminator.validate();
    if (n < discriminator.max_window()) {
      throw InvalidConfig("segment_seconds is shorter than the largest discriminator window");
    }
  }
}

int64_t ExperimentConfig::segment_samples() const { return seconds_to_samples(segment_seconds); }

LossWeights ExperimentConfig::effective_weights() const {
  LossWeights w = weights;
  if (!uses_discriminator(topology)) {
    w.adv = 0.0;
    w.feat = 0.0;
  }
  return w;
}

SpectralResolutionSet ExperimentConfig::resolution_set() const {
  SpectralResolutionSet r;
  r.exponents = resolutions;
  return r;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j{{"topology", to_string(topology)},
                   {"batch_size", batch_size},
                   {"max_steps", max_steps},
                   {"weights", weights.to_json()},
                   {"optimizer", optimizer.to_json()},
                   {"seed", seed},
                   {"scale", to_string(scale)},
                   {"segment_seconds", segment_seconds},
                   {"generator", generator.to_json()},
                   {"discriminator", discriminator.to_json()},
                   {"resolutions", resolutions},
                   {"e2e_encoder", e2e_encoder.to_json()},
                   {"stage2_steps", stage2_steps},
                   {"stage2_optimizer", stage2_optimizer.to_json()},
                   {"deterministic", deterministic},
                   {"checkpoint_every", checkpoint_every}};
  j["conditioning_checkpoint"] =
      conditioning_checkpoint ? nlohmann::json(*conditioning_checkpoint) : nlohmann::json(nullptr);
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  const Scale scale = j.contains("scale") ? scale_from_string(j["scale"]) : Scale::kDesk;
  const Topology topo =
      j.contains("topology") ? topology_from_string(j["topology"]) : Topology::kDisCoGan;
  ExperimentConfig c = preset(scale, topo);
  if (j.contains("conditioning_checkpoint") && !j["conditioning_checkpoint"].is_null()) {
    c.conditioning_checkpoint = j["conditioning_checkpoint"].get<std::string>();
  }
  c.batch_size = j.value("batch_size", c.batch_size);
  c.max_steps = j.value("max_steps", c.max_steps);
  if (j.contains("weights")) c.weights = LossWeights::from_json(j["weights"]);
  if (j.contains("optimizer")) c.optimizer = OptimizerSpec::from_json(j["optimizer"], c.optimizer);
  c.seed = j.value("seed", c.seed);
  c.segment_seconds = j.value("segment_seconds", c.segment_seconds);
  if (j.contains("generator")) c.generator = GeneratorConfig::from_json(j["generator"]);
  if (j.contains("discriminator")) {
    c.discriminator = DiscriminatorConfig::from_json(j["discriminator"]);
  }
  c.resolutions = j.value("resolutions", c.resolutions);
  if (j.contains("e2e_encoder")) c.e2e_encoder = DiscModelConfig::from_json(j["e2e_encoder"]);
  c.stage2_steps = j.value("stage2_steps", c.stage2_steps);
  if (j.contains("stage2_optimizer")) {
    c.stage2_optimizer = OptimizerSpec::from_json(j["stage2_optimizer"], c.stage2_optimizer);
  }
  c.deterministic = j.value("deterministic", c.deterministic);
  c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
  return c;
}

ExperimentConfig ExperimentConfig::preset(Scale scale, Topology topology) {
  ExperimentConfig c;
  c.topology = topology;
  c.scale = scale;
  if (scale == Scale::kPaper) {
    c.batch_size = 16;
    c.max_steps = 600000;
    c.segment_seconds = 2.0;
    c.generator = GeneratorConfig::paper();
    c.discriminator = DiscriminatorConfig::paper();
    c.e2e_encoder = DiscModelConfig::paper(DiscModelKind::kGcrn);
    c.deterministic = false;
  } else {
    c.batch_size = 4;
    c.max_steps = 2000;
    c.segment_seconds = 1.0;
    c.generator = GeneratorConfig::desk();
    c.discriminator = DiscriminatorConfig::desk();
    c.e2e_encoder = DiscModelConfig::desk(DiscModelKind::kGcrn);
  }
  return c;
}

TrainingData::TrainingData(std::vector<RenderedItem> items) : items_(std::move(items)) {}

TrainingData TrainingData::from_manifest(const std::vector<ManifestRow>& rows, int jobs) {
  if (rows.empty()) throw InvalidInput("training manifest is empty");
  std::vector<RenderedItem> items(rows.size());
  parallel_for(rows.size(), jobs, [&](std::size_t i) { items[i] = render_item(rows[i]); });
  return TrainingData(std::move(items));
}

Batch TrainingData::sample(Rng& rng, int batch_size, int64_t segment) const {
  if (items_.empty()) throw InvalidInput("no training data");
  auto mixture = torch::zeros({batch_size, segment});
  auto clean = torch::zeros({batch_size, segment});
  auto mix_acc = mixture.accessor<float, 2>();
  auto clean_acc = clean.accessor<float, 2>();
  for (int b = 0; b < batch_size; ++b) {
    const auto& item = items_[uniform_int(rng, 0, static_cast<int64_t>(items_.size()) - 1)];
    const auto len = static_cast<int64_t>(item.mixture.size());
    const int64_t offset = len > segment ? uniform_int(rng, 0, len - segment) : 0;
    const int64_t count = std::min(segment, len - offset);
    for (int64_t n = 0; n < count; ++n) {
      mix_acc[b][n] = item.mixture.samples[offset + n];
      clean_acc[b][n] = item.clean.samples[offset + n];
    }
  }
  return {mixture, clean};
}

std::unique_ptr<torch::optim::Adam> make_adam(const std::vector<torch::Tensor>& params,
                                              const OptimizerSpec& spec) {
  auto opts = torch::optim::AdamOptions(spec.lr)
                  .betas({spec.beta1, spec.beta2})
                  .weight_decay(spec.weight_decay);
  return std::make_unique<torch::optim::Adam>(params, opts);
}

bool discriminator_should_update(double l_d, double l_adv) { return l_d > l_adv; }

void DiscTrainConfig::validate() const {
  model.validate();
  validate_optimizer(optimizer, "disc optimizer");
  if (batch_size < 1 || steps < 0) throw InvalidConfig("invalid batch size or step count");
  if (seconds_to_samples(segment_seconds) < model.spec().window) {
    throw InvalidConfig("segment shorter than one analysis window");
  }
  if (model.kind == DiscModelKind::kDccrn && !model.with_decoder) {
    throw InvalidConfig("a DCCRN without decoder cannot be trained as an enhancer");
  }
}

nlohmann::json DiscTrainConfig::to_json() const {
  return {{"model", model.to_json()},         {"batch_size", batch_size},
          {"steps", steps},                   {"segment_seconds", segment_seconds},
          {"optimizer", optimizer.to_json()}, {"seed", seed},
          {"single_batch", single_batch},     {"deterministic", deterministic}};
}

DiscTrainConfig DiscTrainConfig::from_json(const nlohmann::json& j) {
  DiscTrainConfig c;
  if (j.contains("model")) c.model = DiscModelConfig::from_json(j["model"]);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.steps = j.value("steps", c.steps);
  c.segment_seconds = j.value("segment_seconds", c.segment_seconds);
  if (j.contains("optimizer")) c.optimizer = OptimizerSpec::from_json(j["optimizer"], c.optimizer);
  c.seed = j.value("seed", c.seed);
  c.single_batch = j.value("single_batch", c.single_batch);
  c.deterministic = j.value("deterministic", c.deterministic);
  return c;
}

namespace {

void check_finite(const torch::Tensor& loss, int64_t step, const std::string& what) {
  const double v = loss.item<double>();
  if (!std::isfinite(v)) {
    throw RuntimeFailure(what + " diverged at step " + std::to_string(step) + " (loss " +
                         std::to_string(v) + ")");
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << text;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void apply_determinism(bool deterministic) {
  if (deterministic) torch::set_num_threads(1);
}

}  // namespace

DiscTrainResult train_discriminative(const DiscTrainConfig& cfg, const TrainingData& data,
                                     const fs::path& out_dir) {
  cfg.validate();
  apply_determinism(cfg.deterministic);
  torch::manual_seed(substream_seed(cfg.seed, "disc-init"));
  DiscTrainResult result;
  result.model = make_disc_model(cfg.model);
  auto& model = *result.model;
  model.train();
  auto opt = make_adam(model.parameters(), cfg.optimizer);
  Rng rng(substream_seed(cfg.seed, "disc-batches"));
  const int64_t segment = seconds_to_samples(cfg.segment_seconds);
  const auto stft_cfg = model.spec().stft();
  std::optional<Batch> fixed;
  for (int64_t step = 0; step < cfg.steps; ++step) {
    Batch batch;
    if (cfg.single_batch) {
      if (!fixed) fixed = data.sample(rng, cfg.batch_size, segment);
      batch = *fixed;
    } else {
      batch = data.sample(rng, cfg.batch_size, segment);
    }
    auto est = model.enhance(batch.mixture);
    auto loss = disc_training_loss(est, batch.clean, stft_cfg);
    check_finite(loss, step, "discriminative training");
    opt->zero_grad();
    loss.backward();
    opt->step();
    result.losses.push_back(loss.item<double>());
  }
  model.eval();
  if (!out_dir.empty()) {
    save_disc_model(out_dir, model);
    write_json(out_dir / "train_config.json", cfg.to_json());
    std::string log = "step,loss\n";
    for (std::size_t i = 0; i < result.losses.size(); ++i) {
      log += std::to_string(i) + "," + format_double(result.losses[i]) + "\n";
    }
    write_text(out_dir / "disc_log.csv", log);
  }
  return result;
}

namespace {

GanModels build_models(const ExperimentConfig& cfg, DiscModelPtr extractor,
                       bool with_discriminator) {
  GanModels m;
  m.topology = cfg.topology;
  torch::manual_seed(substream_seed(cfg.seed, "init"));
  if (cfg.topology == Topology::kE2eDisCoGan && !extractor) {
    extractor = make_disc_model(cfg.e2e_encoder);
  }
  m.extractor = extractor;
  if (requires_checkpoint(cfg.topology)) {
    if (!m.extractor) throw InvalidConfig("topology requires a conditioning model");
    set_frozen(*m.extractor, true);
  }
  auto gcfg = cfg.generator;
  if (is_conditioned(cfg.topology)) gcfg = gcfg.with_conditioning(m.extractor->config().latent_dim);
  m.generator = Generator(gcfg);
  if (with_discriminator && uses_discriminator(cfg.topology)) {
    m.discriminator = DiscriminatorBank(cfg.discriminator);
  }
  return m;
}

}  // namespace

GanModels assemble_topology(const ExperimentConfig& cfg) {
  cfg.validate();
  DiscModelPtr extractor;
  if (requires_checkpoint(cfg.topology)) extractor = load_disc_model(*cfg.conditioning_checkpoint);
  if (cfg.topology == Topology::kGanLast || cfg.topology == Topology::kGanFirst) {
    if (extractor->config().kind == DiscModelKind::kDccrn && !extractor->config().with_decoder) {
      throw InvalidConfig("two-stage topologies need a stage model that can enhance");
    }
  }
  return build_models(cfg, extractor, /*with_discriminator=*/true);
}

namespace {

torch::Tensor disc_latent(GanModels& m, const torch::Tensor& wav, const EnhanceOptions& opts) {
  const auto& input = opts.conditioning_input.defined() ? opts.conditioning_input : wav;
  torch::Tensor latent;
  if (m.topology == Topology::kE2eDisCoGan) {
    latent = m.extractor->encode(input);
  } else {
    torch::NoGradGuard no_grad;
    latent = m.extractor->encode(input);
  }
  if (opts.latent_transform) latent = opts.latent_transform(latent);
  return latent;
}

}  // namespace

torch::Tensor generator_path(GanModels& m, const torch::Tensor& wav, const EnhanceOptions& opts) {
  switch (m.topology) {
    case Topology::kNoCoGan:
    case Topology::kNoCoGanD:
    case Topology::kGanFirst:
      return m.generator->forward(wav);
    case Topology::kE2eDisCoGan:
    case Topology::kDisCoGan:
    case Topology::kDisCoGanD:
      return m.generator->forward(wav, disc_latent(m, wav, opts));
    case Topology::kGanLast: {
      torch::Tensor stage1;
      {
        torch::NoGradGuard no_grad;
        stage1 = m.extractor->enhance(wav);
      }
      return m.generator->forward(stage1);
    }
  }
  throw InvalidConfig("unknown topology");
}

torch::Tensor enhance(GanModels& m, const torch::Tensor& wav, const EnhanceOptions& opts) {
  if (m.topology == Topology::kGanFirst) return m.extractor->enhance(generator_path(m, wav, opts));
  return generator_path(m, wav, opts);
}

std::string log_header() { return "step,l_t,l_f,l_adv,l_feat,l_d,total_g"; }

std::string format_log_row(const LogRow& row) {
  const auto& l = row.losses;
  std::string out = std::to_string(row.step);
  for (double v : {l.l_t, l.l_f, l.l_adv, l.l_feat, l.l_d, l.total_g}) out += "," + format_double(v);
  return out;
}

GanTrainer::GanTrainer(const ExperimentConfig& cfg, TrainingData data, fs::path run_dir,
                       bool single_batch)
    : cfg_(cfg), data_(std::move(data)), run_dir_(std::move(run_dir)), single_batch_(single_batch) {
  cfg_.validate();
  apply_determinism(cfg_.deterministic);
  models_ = assemble_topology(cfg_);
  for (const auto& p : models_.generator->parameters()) g_params_.push_back(p);
  if (cfg_.topology == Topology::kE2eDisCoGan) {
    for (const auto& p : models_.extractor->parameters()) g_params_.push_back(p);
  }
  opt_g_ = make_adam(g_params_, cfg_.optimizer);
  if (models_.discriminator) {
    d_params_ = models_.discriminator->parameters();
    opt_d_ = make_adam(d_params_, cfg_.optimizer);
  }
  state_.rng = Rng(substream_seed(cfg_.seed, "batches"));
}

Batch GanTrainer::next_batch() {
  if (!single_batch_) return data_.sample(state_.rng, cfg_.batch_size, cfg_.segment_samples());
  if (!fixed_batch_) fixed_batch_ = data_.sample(state_.rng, cfg_.batch_size, cfg_.segment_samples());
  return *fixed_batch_;
}

namespace {

void assign_grads(const std::vector<torch::Tensor>& params,
                  const std::vector<torch::Tensor>& grads) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params[i];
    p.mutable_grad() = grads[i].defined() ? grads[i] : torch::Tensor();
  }
}

}  // namespace

LogRow GanTrainer::step() {
  const auto batch = next_batch();
  const auto weights = cfg_.effective_weights();
  auto est = generator_path(models_, batch.mixture);
  auto l_t = loss_time(batch.clean, est);
  auto l_f = loss_freq(batch.clean, est, cfg_.resolution_set());
  auto zero = torch::zeros({}, est.options());
  torch::Tensor l_adv = zero, l_feat = zero, l_d = zero;
  if (models_.discriminator) {
    auto real = models_.discriminator->forward(batch.clean);
    auto fake = models_.discriminator->forward(est);
    l_adv = loss_adv_generator(fake);
    l_feat = loss_feature_matching(real, fake);
    l_d = loss_discriminator(real, fake);
  }
  auto total = total_generator_loss(l_t, l_f, l_adv, l_feat, weights);
  check_finite(total, state_.step, "generator loss");

  LogRow row;
  row.step = state_.step;
  row.losses = {l_t.item<double>(),  l_f.item<double>(), l_adv.item<double>(),
                l_feat.item<double>(), l_d.item<double>(), total.item<double>()};
  row.d_updated = models_.discriminator &&
                  discriminator_should_update(row.losses.l_d, row.losses.l_adv);

  auto g_grads = torch::autograd::grad({total}, g_params_, {}, /*retain_graph=*/row.d_updated,
                                       /*create_graph=*/false, /*allow_unused=*/true);
  std::vector<torch::Tensor> d_grads;
  if (row.d_updated) {
    check_finite(l_d, state_.step, "discriminator loss");
    d_grads = torch::autograd::grad({l_d}, d_params_, {}, false, false, true);
  }
  assign_grads(g_params_, g_grads);
  opt_g_->step();
  if (row.d_updated) {
    assign_grads(d_params_, d_grads);
    opt_d_->step();
    ++state_.updates_taken;
  } else {
    ++state_.updates_skipped;
  }
  ++state_.step;
  append_log(row);
  return row;
}

std::vector<LogRow> GanTrainer::run(std::optional<int64_t> steps) {
  const int64_t target = steps ? state_.step + *steps : cfg_.max_steps;
  std::vector<LogRow> rows;
  while (state_.step < target) {
    rows.push_back(step());
    if (cfg_.checkpoint_every > 0 && !run_dir_.empty() &&
        state_.step % cfg_.checkpoint_every == 0) {
      save_state(run_dir_ / "state");
    }
  }
  return rows;
}

std::vector<double> GanTrainer::train_stage2() {
  std::vector<double> losses;
  if (cfg_.topology != Topology::kGanFirst) return losses;
  auto& gen = *models_.generator;
  auto& stage = *models_.extractor;
  set_frozen(gen, true);
  set_frozen(stage, false);
  auto opt = make_adam(stage.parameters(), cfg_.stage2_optimizer);
  Rng rng(substream_seed(cfg_.seed, "stage2-batches"));
  const auto stft_cfg = stage.spec().stft();
  for (int64_t i = 0; i < cfg_.stage2_steps; ++i) {
    const Batch batch = single_batch_ && fixed_batch_
                            ? *fixed_batch_
                            : data_.sample(rng, cfg_.batch_size, cfg_.segment_samples());
    torch::Tensor stage1;
    {
      torch::NoGradGuard no_grad;
      stage1 = gen.forward(batch.mixture);
    }
    auto loss = disc_training_loss(stage.enhance(stage1), batch.clean, stft_cfg);
    check_finite(loss, i, "second-stage training");
    opt->zero_grad();
    loss.backward();
    opt->step();
    losses.push_back(loss.item<double>());
  }
  set_frozen(stage, true);
  if (!run_dir_.empty()) {
    std::string log = "step,loss\n";
    for (std::size_t i = 0; i < losses.size(); ++i) {
      log += std::to_string(i) + "," + format_double(losses[i]) + "\n";
    }
    write_text(run_dir_ / "stage2_log.csv", log);
  }
  return losses;
}

void GanTrainer::append_log(const LogRow& row) const {
  if (run_dir_.empty()) return;
  fs::create_directories(run_dir_);
  const auto path = run_dir_ / "log.csv";
  const bool fresh = !fs::exists(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw RuntimeFailure("cannot append to " + path.string());
  if (fresh) out << log_header() << '\n';
  out << format_log_row(row) << '\n';
}

void GanTrainer::save_run() const {
  if (run_dir_.empty()) throw InvalidInput("no run directory configured");
  write_checkpoint_meta(run_dir_, "experiment", cfg_.to_json());
  save_module(*models_.generator, run_dir_ / "generator.pt");
  if (models_.discriminator) save_module(*models_.discriminator, run_dir_ / "discriminator.pt");
  if (models_.extractor) save_disc_model(run_dir_ / "extractor", *models_.extractor);
}

void GanTrainer::save_state(const fs::path& dir) const {
  fs::create_directories(dir);
  save_module(*models_.generator, dir / "generator.pt");
  if (models_.discriminator) save_module(*models_.discriminator, dir / "discriminator.pt");
  if (models_.extractor) save_module(*models_.extractor, dir / "extractor.pt");
  {
    torch::serialize::OutputArchive a;
    opt_g_->save(a);
    a.save_to((dir / "opt_g.pt").string());
  }
  if (opt_d_) {
    torch::serialize::OutputArchive a;
    opt_d_->save(a);
    a.save_to((dir / "opt_d.pt").string());
  }
  if (fixed_batch_) {
    torch::save(std::vector<torch::Tensor>{fixed_batch_->mixture, fixed_batch_->clean},
                (dir / "batch.pt").string());
  }
  write_json(dir / "state.json", {{"step", state_.step},
                                  {"updates_taken", state_.updates_taken},
                                  {"updates_skipped", state_.updates_skipped},
                                  {"rng", serialize_rng(state_.rng)},
                                  {"config_hash", config_hash(cfg_.to_json())}});
}

void GanTrainer::load_state(const fs::path& dir) {
  const auto j = read_json(dir / "state.json");
  if (j.value("config_hash", std::string()) != config_hash(cfg_.to_json())) {
    throw InvalidInput("training state in " + dir.string() + " belongs to a different config");
  }
  load_module(*models_.generator, dir / "generator.pt");
  if (models_.discriminator) load_module(*models_.discriminator, dir / "discriminator.pt");
  if (models_.extractor) load_module(*models_.extractor, dir / "extractor.pt");
  {
    torch::serialize::InputArchive a;
    a.load_from((dir / "opt_g.pt").string());
    opt_g_->load(a);
  }
  if (opt_d_) {
    torch::serialize::InputArchive a;
    a.load_from((dir / "opt_d.pt").string());
    opt_d_->load(a);
  }
  if (fs::exists(dir / "batch.pt")) {
    std::vector<torch::Tensor> b;
    torch::load(b, (dir / "batch.pt").string());
    fixed_batch_ = Batch{b.at(0), b.at(1)};
  }
  state_.step = j.at("step").get<int64_t>();
  state_.updates_taken = j.at("updates_taken").get<int64_t>();
  state_.updates_skipped = j.at("updates_skipped").get<int64_t>();
  state_.rng = deserialize_rng(j.at("rng").get<std::string>());

  // Drop log rows written after the restored step.
  if (!run_dir_.empty() && fs::exists(run_dir_ / "log.csv")) {
    std::ifstream in(run_dir_ / "log.csv");
    std::string line, kept;
    std::getline(in, line);
    kept = line + "\n";
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (std::stoll(line.substr(0, line.find(','))) < state_.step) kept += line + "\n";
    }
    in.close();
    write_text(run_dir_ / "log.csv", kept);
  }
}

GanTrainResult train_gan(const ExperimentConfig& cfg, const TrainingData& data,
                         const fs::path& run_dir) {
  if (!run_dir.empty()) {
    fs::create_directories(run_dir);
    fs::remove(run_dir / "log.csv");
  }
  GanTrainer trainer(cfg, data, run_dir);
  GanTrainResult result;
  result.log = trainer.run();
  trainer.train_stage2();
  if (!run_dir.empty()) {
    trainer.save_run();
    trainer.save_state(run_dir / "state");
  }
  result.state = trainer.state();
  return result;
}

Pipeline Pipeline::identity() {
  Pipeline p;
  p.name_ = "identity";
  return p;
}

Pipeline Pipeline::load(const fs::path& run_dir) {
  auto cfg = ExperimentConfig::from_json(read_checkpoint_config(run_dir, "experiment"));
  DiscModelPtr extractor;
  if (fs::exists(run_dir / "extractor")) extractor = load_disc_model(run_dir / "extractor");
  if ((requires_checkpoint(cfg.topology) || cfg.topology == Topology::kE2eDisCoGan) && !extractor) {
    throw InvalidInput("run " + run_dir.string() + " lacks its extractor/ checkpoint");
  }
  auto models = build_models(cfg, extractor, /*with_discriminator=*/false);
  load_module(*models.generator, run_dir / "generator.pt");
  models.generator->eval();
  if (models.extractor) set_frozen(*models.extractor, true);
  auto p = from_models(std::move(models));
  p.config_ = cfg.to_json();
  return p;
}

Pipeline Pipeline::from_models(GanModels models) {
  Pipeline p;
  p.name_ = to_string(models.topology);
  p.config_ = {{"topology", p.name_}};
  p.models_ = std::make_shared<GanModels>(std::move(models));
  return p;
}

Pipeline Pipeline::from_disc_model(DiscModelPtr model) {
  if (!model) throw InvalidInput("null discriminative model");
  Pipeline p;
  p.name_ = to_string(model->config().kind);
  p.config_ = model->config().to_json();
  p.disc_ = std::move(model);
  return p;
}

torch::Tensor Pipeline::enhance(const torch::Tensor& wav, const EnhanceOptions& opts) const {
  torch::NoGradGuard no_grad;
  if (models_) return discogan::enhance(*models_, wav, opts);
  if (disc_) return disc_->enhance(wav);
  return wav.clone();
}

AudioBuffer Pipeline::enhance(const AudioBuffer& audio, const EnhanceOptions& opts) const {
  check_pipeline_audio(audio);
  return from_tensor(enhance(to_tensor(audio).unsqueeze(0), opts).squeeze(0));
}

bool Pipeline::conditioned() const { return models_ && is_conditioned(models_->topology); }

std::optional<Topology> Pipeline::topology() const {
  if (models_) return models_->topology;
  return std::nullopt;
}

}  // namespace discogan
