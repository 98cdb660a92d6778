// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "testing.h"

#include <cmath>
#include <algorithm>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "discogan/checkpoint.h"
#include "discogan/errors.h"
#include "discogan/training.h"
#include "support.h"

namespace discogan {
namespace {

using test::TempDir;
using test::synthetic_data;

ExperimentConfig fast_config(Topology topo, const std::optional<std::string>& ckpt) {
  auto cfg = ExperimentConfig::preset(Scale::kDesk, topo);
  cfg.batch_size = 1;
  cfg.segment_seconds = 0.25;
  cfg.max_steps = 4;
  cfg.stage2_steps = 2;
  cfg.seed = 11;
  if (requires_checkpoint(topo)) cfg.conditioning_checkpoint = ckpt;
  return cfg;
}

// Untrained desk GCRN checkpoint shared by the cases below.
const std::string& gcrn_checkpoint() {
  static TempDir dir("train-gcrn");
  static const std::string path = [] {
    torch::manual_seed(99);
    auto model = make_disc_model(DiscModelConfig::desk(DiscModelKind::kGcrn));
    save_disc_model(dir / "gcrn", *model);
    return (dir / "gcrn").string();
  }();
  return path;
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

bool rows_equal(const std::vector<LogRow>& a, const std::vector<LogRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (format_log_row(a[i]) != format_log_row(b[i])) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("training") {

TEST_CASE("topology table") {
  CHECK(all_topologies().size() == 7);
  for (auto t : all_topologies()) CHECK(topology_from_string(to_string(t)) == t);
  CHECK(topology_from_string("DISCOGAN") == Topology::kDisCoGan);
  CHECK(topology_from_string("GAN_LAST") == Topology::kGanLast);
  CHECK(topology_from_string("e2e") == Topology::kNoCoGan);
  CHECK_THROWS_AS(topology_from_string("cogan"), InvalidConfig);
  CHECK(is_conditioned(Topology::kDisCoGan));
  CHECK(is_conditioned(Topology::kE2eDisCoGan));
  CHECK(!is_conditioned(Topology::kGanLast));
  CHECK(!uses_discriminator(Topology::kDisCoGanD));
  CHECK(!uses_discriminator(Topology::kNoCoGanD));
  CHECK(requires_checkpoint(Topology::kGanFirst));
  CHECK(!requires_checkpoint(Topology::kE2eDisCoGan));
  CHECK(scale_from_string("paper") == Scale::kPaper);
  CHECK_THROWS_AS(scale_from_string("huge"), InvalidConfig);
}

TEST_CASE("discriminator update gating") {
  CHECK(!discriminator_should_update(0.5, 1.0));
  CHECK(discriminator_should_update(2.0, 1.0));
  CHECK(!discriminator_should_update(1.0, 1.0));
}

TEST_CASE("presets") {
  auto paper = ExperimentConfig::preset(Scale::kPaper, Topology::kDisCoGan);
  CHECK(paper.batch_size == 16);
  CHECK(paper.segment_seconds == 2.0);
  CHECK(paper.generator == GeneratorConfig::paper());
  CHECK(paper.optimizer.lr == 3e-4);
  CHECK(paper.optimizer.beta1 == 0.5);
  CHECK(paper.optimizer.beta2 == 0.9);
  CHECK(paper.weights == LossWeights{});
  auto desk = ExperimentConfig::preset(Scale::kDesk, Topology::kNoCoGan);
  CHECK(desk.batch_size == 4);
  CHECK(desk.generator == GeneratorConfig::desk());
}

TEST_CASE("config validation") {
  auto cfg = fast_config(Topology::kDisCoGan, std::nullopt);
  CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
  cfg.conditioning_checkpoint = gcrn_checkpoint();
  CHECK_NOTHROW(cfg.validate());
  for (auto t : {Topology::kNoCoGan, Topology::kE2eDisCoGan, Topology::kNoCoGanD}) {
    auto e2e = fast_config(t, std::nullopt);
    CHECK_NOTHROW(e2e.validate());
    e2e.conditioning_checkpoint = gcrn_checkpoint();
    CHECK_THROWS_AS(e2e.validate(), InvalidConfig);
  }
  auto bad = fast_config(Topology::kNoCoGan, std::nullopt);
  bad.segment_seconds = 0.1;  // shorter than the 2048 discriminator window
  CHECK_THROWS_AS(bad.validate(), InvalidConfig);
  bad = fast_config(Topology::kNoCoGan, std::nullopt);
  bad.generator = bad.generator.with_conditioning(512);
  CHECK_THROWS_AS(bad.validate(), InvalidConfig);
  bad = fast_config(Topology::kNoCoGan, std::nullopt);
  bad.batch_size = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidConfig);
  bad = fast_config(Topology::kNoCoGan, std::nullopt);
  bad.optimizer.beta1 = 1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidConfig);
  bad = fast_config(Topology::kNoCoGan, std::nullopt);
  bad.weights.feat = -1;
  CHECK_THROWS_AS(bad.validate(), InvalidConfig);
  auto missing = fast_config(Topology::kDisCoGan, "/nonexistent/ckpt");
  CHECK_THROWS_AS(assemble_topology(missing), InvalidInput);
}

TEST_CASE("reconstruction-only variants zero the adversarial weights") {
  for (auto t : {Topology::kDisCoGanD, Topology::kNoCoGanD}) {
    auto w = fast_config(t, gcrn_checkpoint()).effective_weights();
    CHECK(w.adv == 0.0);
    CHECK(w.feat == 0.0);
    CHECK(w.time == 1.0);
    CHECK(w.freq == 1.0);
  }
  auto w = fast_config(Topology::kDisCoGan, gcrn_checkpoint()).effective_weights();
  CHECK(w == LossWeights{});
}

TEST_CASE("config JSON round trip and preset fallback") {
  for (auto t : all_topologies()) {
    auto cfg = fast_config(t, gcrn_checkpoint());
    auto back = ExperimentConfig::from_json(cfg.to_json());
    CHECK(back.to_json() == cfg.to_json());
  }
  auto sparse = ExperimentConfig::from_json({{"scale", "paper"}, {"topology", "nocogan"}});
  CHECK(sparse.batch_size == 16);
  CHECK(sparse.topology == Topology::kNoCoGan);
}

TEST_CASE("batch sampling is seeded and zero-pads short items") {
  auto data = synthetic_data(3, 1, 3000);
  Rng a(5), b(5);
  auto x = data.sample(a, 2, 4000);
  auto y = data.sample(b, 2, 4000);
  CHECK(x.mixture.sizes() == torch::IntArrayRef({2, 4000}));
  CHECK(torch::equal(x.mixture, y.mixture));
  CHECK(torch::equal(x.clean, y.clean));
  CHECK(x.mixture.narrow(1, 3000, 1000).abs().max().item<float>() == 0.0f);
  CHECK_THROWS_AS(TrainingData().sample(a, 1, 100), InvalidInput);
  CHECK_THROWS_AS(TrainingData::from_manifest({}), InvalidInput);
}

TEST_CASE("assembled topologies") {
  for (auto t : all_topologies()) {
    CAPTURE(to_string(t));
    auto m = assemble_topology(fast_config(t, gcrn_checkpoint()));
    CHECK(m.topology == t);
    CHECK(static_cast<bool>(m.discriminator) == uses_discriminator(t));
    CHECK(m.generator->config().conditioning.has_value() == is_conditioned(t));
    CHECK(static_cast<bool>(m.extractor) == (requires_checkpoint(t) || t == Topology::kE2eDisCoGan));
    if (requires_checkpoint(t)) {
      CHECK(!m.extractor->is_training());
      for (const auto& p : m.extractor->parameters()) CHECK(!p.requires_grad());
    }
    torch::NoGradGuard guard;
    auto out = enhance(m, torch::randn({1, 4000}) * 0.1);
    CHECK(out.sizes() == torch::IntArrayRef({1, 4000}));
  }
}

TEST_CASE("checkpoint reload gives identical extractor output") {
  auto loaded = load_disc_model(gcrn_checkpoint());
  auto again = load_disc_model(gcrn_checkpoint());
  torch::NoGradGuard guard;
  auto x = torch::randn({1, 4000}) * 0.1;
  CHECK(torch::equal(loaded->encode(x), again->encode(x)));
  CHECK(torch::equal(loaded->enhance(x), again->enhance(x)));
}

TEST_CASE("GAN steps keep the frozen extractor bit-identical") {
  GanTrainer trainer(fast_config(Topology::kDisCoGan, gcrn_checkpoint()), synthetic_data(4, 2));
  const auto before = snapshot_parameters(*trainer.models().extractor);
  const auto gen_before = snapshot_parameters(*trainer.models().generator);
  auto rows = trainer.run();
  CHECK(rows.size() == 4);
  CHECK(bit_identical(before, snapshot_parameters(*trainer.models().extractor)));
  CHECK(!bit_identical(gen_before, snapshot_parameters(*trainer.models().generator)));
  const auto& st = trainer.state();
  CHECK(st.step == 4);
  CHECK(st.updates_taken + st.updates_skipped == st.step);
  for (const auto& r : rows) {
    const double expect = total_generator_loss(r.losses, LossWeights{});
    CHECK(std::abs(r.losses.total_g - expect) <= 1e-5 * std::max(1.0, std::abs(expect)));
    CHECK(r.d_updated == discriminator_should_update(r.losses.l_d, r.losses.l_adv));
  }
}

TEST_CASE("identical config and seed reproduce the log bit-identically") {
  auto cfg = fast_config(Topology::kNoCoGan, std::nullopt);
  auto data = synthetic_data(4, 3);
  GanTrainer a(cfg, data), b(cfg, data);
  auto ra = a.run(), rb = b.run();
  CHECK(rows_equal(ra, rb));
  cfg.seed = 12;
  GanTrainer c(cfg, data);
  CHECK(!rows_equal(ra, c.run()));
}

TEST_CASE("resume reproduces the next steps bit-identically") {
  TempDir dir("resume");
  auto cfg = fast_config(Topology::kDisCoGan, gcrn_checkpoint());
  auto data = synthetic_data(4, 4);
  GanTrainer a(cfg, data, dir / "a");
  a.run(2);
  a.save_state(dir / "snap");
  auto tail = a.run(2);

  GanTrainer b(cfg, data, dir / "a");
  b.load_state(dir / "snap");
  CHECK(b.state().step == 2);
  // Rows logged after the snapshot are dropped on resume.
  CHECK(read_lines(dir / "a" / "log.csv").size() == 3);
  auto resumed = b.run(2);
  CHECK(rows_equal(tail, resumed));
  CHECK(bit_identical(snapshot_parameters(*a.models().generator),
                      snapshot_parameters(*b.models().generator)));
  CHECK(b.state().updates_taken + b.state().updates_skipped == 4);
  const auto lines = read_lines(dir / "a" / "log.csv");
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == log_header());
  CHECK(lines[3] == format_log_row(resumed[0]));

  auto other = cfg;
  other.seed = 5;
  GanTrainer c(other, data);
  CHECK_THROWS_AS(c.load_state(dir / "snap"), InvalidInput);
}

TEST_CASE("single-batch resume restores the fixed batch") {
  TempDir dir("resume-single");
  auto cfg = fast_config(Topology::kNoCoGanD, std::nullopt);
  auto data = synthetic_data(4, 5);
  GanTrainer a(cfg, data, {}, true);
  a.run(1);
  a.save_state(dir / "snap");
  auto tail = a.run(2);
  GanTrainer b(cfg, synthetic_data(4, 6), {}, true);
  b.load_state(dir / "snap");
  CHECK(rows_equal(tail, b.run(2)));
}

TEST_CASE("reconstruction-only rows carry no adversarial terms") {
  GanTrainer trainer(fast_config(Topology::kNoCoGanD, std::nullopt), synthetic_data(2, 7));
  CHECK(!trainer.models().discriminator);
  for (const auto& r : trainer.run(2)) {
    CHECK(r.losses.l_adv == 0.0);
    CHECK(r.losses.l_feat == 0.0);
    CHECK(r.losses.l_d == 0.0);
    CHECK(!r.d_updated);
    CHECK(std::abs(r.losses.total_g - (r.losses.l_t + r.losses.l_f)) < 1e-5);
  }
}

TEST_CASE("E2E conditioning encoder is trained jointly") {
  GanTrainer trainer(fast_config(Topology::kE2eDisCoGan, std::nullopt), synthetic_data(2, 8));
  const auto before = snapshot_parameters(*trainer.models().extractor);
  trainer.run(2);
  CHECK(!bit_identical(before, snapshot_parameters(*trainer.models().extractor)));
}

TEST_CASE("GAN_LAST refines the stage-1 output") {
  GanTrainer trainer(fast_config(Topology::kGanLast, gcrn_checkpoint()), synthetic_data(2, 9));
  trainer.run(2);
  auto& m = trainer.models();
  torch::NoGradGuard guard;
  auto x = torch::randn({1, 4000}) * 0.1;
  auto stage1 = m.extractor->enhance(x);
  auto out = enhance(m, x);
  CHECK(!torch::equal(out, stage1));
  CHECK(torch::equal(out, m.generator->forward(stage1)));
}

TEST_CASE("GAN_FIRST second stage trains only the stage model") {
  GanTrainer trainer(fast_config(Topology::kGanFirst, gcrn_checkpoint()), synthetic_data(2, 10));
  trainer.run(2);
  const auto gen = snapshot_parameters(*trainer.models().generator);
  const auto stage = snapshot_parameters(*trainer.models().extractor);
  auto losses = trainer.train_stage2();
  CHECK(losses.size() == 2);
  CHECK(bit_identical(gen, snapshot_parameters(*trainer.models().generator)));
  CHECK(!bit_identical(stage, snapshot_parameters(*trainer.models().extractor)));
  for (const auto& p : trainer.models().extractor->parameters()) CHECK(!p.requires_grad());
  // Other topologies have no second stage.
  GanTrainer plain(fast_config(Topology::kNoCoGanD, std::nullopt), synthetic_data(2, 10));
  CHECK(plain.train_stage2().empty());
}

TEST_CASE("non-finite loss raises RuntimeFailure") {
  auto data = synthetic_data(1, 11);
  auto item = data.item(0);
  std::fill(item.mixture.samples.begin(), item.mixture.samples.end(), std::nanf(""));
  GanTrainer trainer(fast_config(Topology::kNoCoGanD, std::nullopt), TrainingData({item}));
  CHECK_THROWS_AS(trainer.step(), RuntimeFailure);
}

TEST_CASE("train_gan writes a loadable run directory") {
  TempDir dir("run");
  auto cfg = fast_config(Topology::kDisCoGan, gcrn_checkpoint());
  cfg.max_steps = 2;
  auto result = train_gan(cfg, synthetic_data(2, 12), dir / "run");
  CHECK(result.log.size() == 2);
  for (const char* f : {"config.json", "meta.json", "generator.pt", "discriminator.pt",
                        "log.csv", "extractor/config.json", "state/state.json"}) {
    CAPTURE(f);
    CHECK(std::filesystem::exists(dir / "run" / f));
  }
  const auto lines = read_lines(dir / "run" / "log.csv");
  REQUIRE(lines.size() == 3);
  CHECK(lines[1] == format_log_row(result.log[0]));

  auto pipeline = Pipeline::load(dir / "run");
  CHECK(pipeline.conditioned());
  CHECK(pipeline.topology() == Topology::kDisCoGan);
  auto x = torch::randn({1, 4000}) * 0.1;
  auto y1 = pipeline.enhance(x);
  auto y2 = Pipeline::load(dir / "run").enhance(x);
  CHECK(torch::equal(y1, y2));
  CHECK(torch::equal(Pipeline::identity().enhance(x), x));
}

TEST_CASE("discriminative training") {
  TempDir dir("disc-train");
  DiscTrainConfig cfg;
  cfg.steps = 3;
  cfg.batch_size = 1;
  cfg.segment_seconds = 0.25;
  auto data = synthetic_data(2, 13);
  auto a = train_discriminative(cfg, data, dir / "gcrn");
  auto b = train_discriminative(cfg, data);
  CHECK(a.losses == b.losses);
  CHECK(a.losses.size() == 3);
  CHECK(std::filesystem::exists(dir / "gcrn" / "disc_log.csv"));
  auto loaded = load_disc_model(dir / "gcrn");
  torch::NoGradGuard guard;
  auto x = torch::randn({1, 4000}) * 0.1;
  CHECK(torch::equal(loaded->enhance(x), a.model->enhance(x)));
  CHECK(DiscTrainConfig::from_json(cfg.to_json()).to_json() == cfg.to_json());

  auto no_decoder = cfg;
  no_decoder.model = DiscModelConfig::desk(DiscModelKind::kDccrn);
  no_decoder.model.with_decoder = false;
  CHECK_THROWS_AS(train_discriminative(no_decoder, data), InvalidConfig);
  auto short_segment = cfg;
  short_segment.segment_seconds = 0.01;
  CHECK_THROWS_AS(train_discriminative(short_segment, data), InvalidConfig);
}

}  // TEST_SUITE

}  // namespace discogan
