// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Acceptance runner: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <torch/torch.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "discogan/checkpoint.h"
#include "discogan/conditioner.h"
#include "discogan/disc_models.h"
#include "discogan/evaluation.h"
#include "discogan/features.h"
#include "discogan/generator.h"
#include "discogan/losses.h"
#include "discogan/metrics.h"
#include "discogan/mixing.h"
#include "discogan/random.h"
#include "discogan/stft.h"
#include "discogan/training.h"
#include "oracles.h"
#include "support.h"

namespace discogan::acceptance {
namespace {

using test::finite_difference;
using test::rel_err;
using test::TempDir;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Untrained desk GCRN checkpoint shared by the training criteria.
const std::string& untrained_gcrn() {
  static TempDir dir("acc-gcrn");
  static const std::string path = [] {
    torch::manual_seed(99);
    auto model = make_disc_model(DiscModelConfig::desk(DiscModelKind::kGcrn));
    save_disc_model(dir / "gcrn", *model);
    return (dir / "gcrn").string();
  }();
  return path;
}

ExperimentConfig smoke_config(Topology topo, int64_t steps, uint64_t seed) {
  auto cfg = ExperimentConfig::preset(Scale::kDesk, topo);
  cfg.batch_size = 1;
  cfg.segment_seconds = 0.25;
  cfg.max_steps = steps;
  cfg.seed = seed;
  if (requires_checkpoint(topo)) cfg.conditioning_checkpoint = untrained_gcrn();
  return cfg;
}

void criterion_1(Outcome& o) {
  StftConfig cfg;
  cfg.fft_length = 512;
  cfg.window_length = 512;
  cfg.hop_length = 160;
  const auto t0 = Clock::now();
  torch::manual_seed(1);
  double worst = 1e9;
  for (int i = 0; i < 100; ++i) {
    auto x = torch::randn({1, 16000}) * 0.3;
    auto y = istft(stft(x, cfg), cfg, x.size(1));
    const double snr = 10 * std::log10(x.pow(2).sum().item<double>() /
                                       (x - y).pow(2).sum().item<double>());
    worst = std::min(worst, snr);
  }
  const double secs = seconds_since(t0);
  o.detail << "min SNR " << worst << " dB over 100 signals in " << secs << " s ";
  o.require(worst > 60.0, "SNR > 60 dB");
  o.require(secs < 10.0, "runtime < 10 s");
}

void criterion_2(Outcome& o) {
  std::mt19937_64 rng(2);
  double worst = 0;
  for (double target : {-25.0, -15.0, -8.0, 0.0, 15.0, 30.0}) {
    AudioBuffer clean(test::random_signal(rng, 16000, 0.3));
    AudioBuffer noise(test::random_signal(rng, 16000, 0.1));
    const auto mix = mix_at_snr(clean, noise, target);
    double pc = 0, pn = 0;
    for (std::size_t i = 0; i < clean.size(); ++i) {
      const double n = static_cast<double>(mix.mixture.samples[i]) - clean.samples[i];
      pc += static_cast<double>(clean.samples[i]) * clean.samples[i];
      pn += n * n;
    }
    worst = std::max(worst, std::abs(10 * std::log10(pc / pn) - target));
  }
  o.detail << "worst SNR error " << worst << " dB ";
  o.require(worst <= 0.01, "within 0.01 dB");
}

void criterion_3(Outcome& o) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int64_t> frames(2, 64);
  int64_t checked = 0;
  for (int64_t lookahead : {0, 1, 20}) {
    for (int trial = 0; trial < 3; ++trial) {
      const int64_t t = trial == 0 ? 64 : frames(rng);
      torch::manual_seed(100 * lookahead + trial);
      ConditionerConfig cfg;
      cfg.disc_dim = 6;
      cfg.latent_dim = 4;
      cfg.num_heads = 2;
      cfg.lookahead = lookahead;
      Conditioner cond(cfg);
      torch::NoGradGuard guard;
      auto g = torch::randn({1, t, 4});
      auto d = torch::randn({1, t, 6});
      auto base = cond->condition(g, d);
      for (int64_t q = 0; q < t; ++q) {
        auto d2 = d.clone();
        d2.select(1, q).add_(torch::randn({6}) * 5);
        auto out = cond->condition(g, d2);
        for (int64_t p = 0; p < t; ++p) {
          const bool same = torch::equal(out.select(1, p), base.select(1, p));
          if (q > p + lookahead) {
            o.require(same, "frame beyond p+L leaked (T=" + std::to_string(t) + ")");
          } else if (q >= p) {
            o.require(!same, "in-window frame ignored (T=" + std::to_string(t) + ")");
          }
          ++checked;
        }
      }
    }
  }
  o.detail << checked << " (p, q) pairs checked ";
}

void criterion_4(Outcome& o) {
  torch::manual_seed(4);
  double worst = 0;
  // Time loss.
  auto s = torch::randn({2, 300}, torch::kFloat64) * 0.3;
  auto e = s + torch::randn({2, 300}, torch::kFloat64) * 0.1;
  {
    auto rs = test::rows_of(s), re = test::rows_of(e);
    double acc = 0;
    for (std::size_t b = 0; b < rs.size(); ++b)
      for (std::size_t i = 0; i < rs[b].size(); ++i) acc += std::abs(rs[b][i] - re[b][i]);
    worst = std::max(worst, rel_err(loss_time(s, e).item<double>(), acc / 600.0));
  }
  // Frequency loss over three resolutions.
  {
    SpectralResolutionSet q;
    q.exponents = {5, 6, 7};
    worst = std::max(worst, rel_err(loss_freq(s, e, q).item<double>(),
                                    test::brute_loss_freq(test::rows_of(s), test::rows_of(e), {5, 6, 7})));
  }
  // Hinge and feature-matching losses.
  DiscriminatorOutput real, fake;
  for (int k = 0; k < 3; ++k) {
    real.logits.push_back(torch::randn({2, 1, 5 + k, 3}, torch::kFloat64) * 2);
    fake.logits.push_back(torch::randn({2, 1, 5 + k, 3}, torch::kFloat64) * 2);
    real.features.emplace_back();
    fake.features.emplace_back();
    for (int l = 0; l < 4; ++l) {
      real.features.back().push_back(torch::randn({2, 3, 4 + k, 5 - l}, torch::kFloat64));
      fake.features.back().push_back(torch::randn({2, 3, 4 + k, 5 - l}, torch::kFloat64));
    }
  }
  double adv = 0, disc = 0, feat = 0;
  for (int k = 0; k < 3; ++k) {
    auto r = real.logits[k].contiguous(), g = fake.logits[k].contiguous();
    const auto n = static_cast<double>(r.numel());
    double a = 0, b = 0, c = 0;
    for (int64_t j = 0; j < r.numel(); ++j) {
      a += std::max(0.0, 1 - g.data_ptr<double>()[j]);
      b += std::max(0.0, 1 - r.data_ptr<double>()[j]);
      c += std::max(0.0, 1 + g.data_ptr<double>()[j]);
    }
    adv += a / n / 3;
    disc += (b / n + c / n) / 3;
    for (int l = 0; l < 4; ++l) {
      auto x = real.features[k][l].contiguous(), y = fake.features[k][l].contiguous();
      double sum = 0;
      for (int64_t j = 0; j < x.numel(); ++j) sum += std::abs(x.data_ptr<double>()[j] - y.data_ptr<double>()[j]);
      feat += sum / static_cast<double>(x.numel()) / 12;
    }
  }
  worst = std::max(worst, rel_err(loss_adv_generator(fake).item<double>(), adv));
  worst = std::max(worst, rel_err(loss_discriminator(real, fake).item<double>(), disc));
  worst = std::max(worst, rel_err(loss_feature_matching(real, fake).item<double>(), feat));
  o.detail << "worst rel err " << worst << " ";
  o.require(worst < 1e-6, "oracle rel err < 1e-6");
  // Hand-computed hinge examples.
  using test::d64;
  using test::logits_only;
  o.require(loss_adv_generator(logits_only({d64({0.5}), d64({-0.5})})).item<double>() == 1.0,
            "adv example");
  auto zeros = logits_only({d64({0, 0}), d64({0})});
  o.require(loss_discriminator(zeros, zeros).item<double>() == 2.0, "zero-logit example");
  o.require(loss_discriminator(logits_only({d64({0.25, 2.0}), d64({-0.5})}),
                               logits_only({d64({0.5, -3.0}), d64({-0.75})}))
                    .item<double>() == 1.4375,
            "mixed hinge example");
}

void criterion_5(Outcome& o) {
  const auto t0 = Clock::now();
  double worst = 0;
  {
    torch::manual_seed(12);
    Generator gen(GeneratorConfig::desk().with_conditioning(16));
    gen->to(torch::kFloat64);
    auto wav = (torch::randn({1, 1600}) * 0.3).to(torch::kFloat64);
    auto disc = torch::randn({1, 11, 16}, torch::kFloat64);
    auto energy = [&] { return gen->forward(wav, disc).pow(2).sum(); };
    const auto params = gen->named_parameters();
    std::vector<torch::Tensor> tensors;
    for (const char* name : {"input_conv.v", "enc_res.3.conv2.g", "lstm.weight_hh_l0",
                             "latent_out.bias", "film.2.conv_beta.v", "dec_up.5.v",
                             "output_conv.bias", "conditioner.w_q", "conditioner.proj_weight"}) {
      tensors.push_back(params[name]);
    }
    auto grads = torch::autograd::grad({energy()}, tensors);
    for (std::size_t i = 0; i < tensors.size(); ++i) {
      const int64_t idx = grads[i].reshape({-1}).abs().argmax().item<int64_t>();
      const double fd = finite_difference(tensors[i], idx, [&] { return energy().item<double>(); }, 1e-4);
      worst = std::max(worst, rel_err(grads[i].reshape({-1})[idx].item<double>(), fd));
    }
  }
  {
    torch::manual_seed(7);
    auto s = torch::randn({1, 64}, torch::kFloat64) * 0.3;
    auto e = (s + torch::randn({1, 64}, torch::kFloat64) * 0.2).requires_grad_(true);
    SpectralResolutionSet q;
    q.exponents = {5, 6};
    auto logits = (torch::randn({1, 1, 6, 2}, torch::kFloat64) * 0.5).requires_grad_(true);
    auto real_logits = torch::randn({1, 1, 6, 2}, torch::kFloat64) * 0.5;
    DiscriminatorOutput real;
    real.features = {{torch::randn({1, 1, 6, 2}, torch::kFloat64)}};
    auto fake_of = [](const torch::Tensor& l) {
      DiscriminatorOutput out;
      out.logits = {l};
      out.features = {{l}};
      return out;
    };
    const std::vector<std::pair<torch::Tensor, std::function<torch::Tensor()>>> cases{
        {e, [&] { return loss_time(s, e); }},
        {e, [&] { return loss_freq(s, e, q); }},
        {logits, [&] { return loss_adv_generator(fake_of(logits)); }},
        {logits, [&] { return loss_discriminator(test::logits_only({real_logits}), fake_of(logits)); }},
        {logits, [&] { return loss_feature_matching(real, fake_of(logits)); }}};
    for (const auto& [input, fn] : cases) {
      auto input_ref = input;
      auto grad = torch::autograd::grad({fn()}, {input_ref})[0].reshape({-1});
      for (int64_t i = 0; i < input_ref.numel(); i += 3) {
        const double numeric = finite_difference(input_ref, i, [&] { return fn().item<double>(); }, 1e-6);
        const double analytic = grad[i].item<double>();
        if (std::abs(analytic) < 1e-8 && std::abs(numeric) < 1e-8) continue;
        worst = std::max(worst, rel_err(analytic, numeric));
      }
    }
  }
  const double secs = seconds_since(t0);
  o.detail << "worst rel err " << worst << " in " << secs << " s ";
  o.require(worst < 1e-3, "rel err < 1e-3");
  o.require(secs < 120.0, "runtime < 2 min");
}

void criterion_6(Outcome& o) {
  LossReport parts;
  parts.l_t = 1.0;
  parts.l_f = 1.0;
  parts.l_adv = 9.0;
  parts.l_feat = 0.09;
  LossWeights w;
  w.time = 1.0;
  w.freq = 1.0;
  w.adv = 1.0 / 9.0;
  w.feat = 100.0 / 9.0;
  const double total = total_generator_loss(parts, w);
  o.detail << "total " << total << " ";
  o.require(std::abs(total - 4.0) <= 1e-12, "total == 4.0");
}

void criterion_7(Outcome& o) {
  torch::manual_seed(7);
  Generator gen(GeneratorConfig::paper().with_conditioning(1024));
  auto gcrn = make_disc_model(DiscModelConfig::paper(DiscModelKind::kGcrn));
  gen->eval();
  torch::NoGradGuard guard;
  auto wav = torch::randn({1, 16000}) * 0.1;
  auto state = gen->encode(pack_features(stft(wav, StftConfig::generator())));
  auto disc = align_time(gcrn->encode(wav), state.latent.size(1));
  auto z = gen->condition(state.latent, disc);
  o.detail << "bottleneck " << state.bottleneck.sizes() << ", G_L " << state.latent.sizes()
           << ", D_L " << disc.sizes() << ", Z_L " << z.sizes() << " ";
  o.require(state.bottleneck.size(1) == 512 && state.bottleneck.size(2) == 1 &&
                state.bottleneck.size(3) == state.latent.size(1),
            "bottleneck (C=512, F=1, T)");
  o.require(state.latent.size(2) == 128, "G_L width 128");
  o.require(z.size(2) == 256, "Z_L width 256");
}

void criterion_8(Outcome& o) {
  const int64_t steps = 1000;
  GanTrainer trainer(smoke_config(Topology::kDisCoGan, steps, 8), test::synthetic_data(4, 8));
  const auto before = snapshot_parameters(*trainer.models().extractor);
  const auto t0 = Clock::now();
  trainer.run();
  const auto on_disk = snapshot_parameters(*load_disc_model(untrained_gcrn()));
  const auto after = snapshot_parameters(*trainer.models().extractor);
  o.detail << trainer.state().step << " steps in " << seconds_since(t0) << " s ";
  o.require(trainer.state().step >= 1000, ">= 1000 steps");
  o.require(bit_identical(before, after), "extractor unchanged in memory");
  o.require(bit_identical(on_disk, after), "extractor equals the checkpoint on disk");
}

void criterion_9(Outcome& o) {
  const auto t0 = Clock::now();
  test::ToyFixture toy("desk-low-snr-train", 10, 5, 2.5, 1, std::pair{-5.0, 5.0});
  const auto data = TrainingData::from_manifest(toy.rows);
  TempDir dir("acc-overfit");
  DiscTrainConfig pre;
  pre.steps = 300;
  pre.seed = 9;
  train_discriminative(pre, data, dir / "gcrn");

  auto cfg = ExperimentConfig::preset(Scale::kDesk, Topology::kDisCoGan);
  cfg.batch_size = 1;
  cfg.segment_seconds = 0.25;
  cfg.max_steps = 500;
  cfg.seed = 9;
  // Single-batch smoke: a larger step size than the training preset.
  cfg.optimizer.lr = 1e-3;
  cfg.conditioning_checkpoint = (dir / "gcrn").string();
  GanTrainer trainer(cfg, data, {}, /*single_batch=*/true);
  const auto rows = trainer.run();
  auto mean = [&](std::size_t from, std::size_t to) {
    double s = 0;
    for (auto i = from; i < to; ++i) s += rows[i].losses.total_g;
    return s / static_cast<double>(to - from);
  };
  const double head = mean(0, 10), tail = mean(rows.size() - 10, rows.size());
  // The first draw from the batch stream is the fixed batch.
  Rng rng(substream_seed(cfg.seed, "batches"));
  const auto batch = data.sample(rng, cfg.batch_size, cfg.segment_samples());
  double noisy = 0, enhanced = 0;
  {
    torch::NoGradGuard guard;
    noisy = test::batch_si_sdr(batch.clean, batch.mixture);
    enhanced = test::batch_si_sdr(batch.clean, enhance(trainer.models(), batch.mixture));
  }
  const double secs = seconds_since(t0);
  o.detail << "total_g " << head << " -> " << tail << " (" << 100 * (1 - tail / head)
           << "% drop), SI-SDR " << noisy << " -> " << enhanced << " dB, " << secs << " s ";
  o.require(rows.size() == 500, "500 steps");
  o.require(tail <= 0.5 * head, "total_g drop >= 50%");
  o.require(enhanced - noisy >= 5.0, "SI-SDR gain >= 5 dB");
  o.require(secs < 900.0, "runtime < 15 min");
}

void criterion_10(Outcome& o) {
  const auto topologies = all_topologies();
  const auto data = test::synthetic_data(4, 10);
  torch::manual_seed(10);
  const auto probe = torch::randn({1, 8000}) * 0.2;
  std::vector<torch::Tensor> outputs;
  for (auto topo : topologies) {
    auto cfg = smoke_config(topo, 200, 10);
    cfg.stage2_steps = 20;
    GanTrainer trainer(cfg, data);
    const auto rows = trainer.run();
    trainer.train_stage2();
    o.require(rows.size() == 200, to_string(topo) + " ran 200 steps");
    torch::NoGradGuard guard;
    auto out = enhance(trainer.models(), probe);
    o.require(torch::isfinite(out).all().item<bool>(), to_string(topo) + " finite output");
    outputs.push_back(out);
  }
  double closest = 1e9;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    for (std::size_t j = i + 1; j < outputs.size(); ++j) {
      const double d = (outputs[i] - outputs[j]).abs().max().item<double>();
      closest = std::min(closest, d);
      o.require(d > 1e-6, to_string(topologies[i]) + " vs " + to_string(topologies[j]) + " distinct");
    }
  }
  o.detail << topologies.size() << " topologies, closest pair max|diff| " << closest << " ";
}

bool rows_identical(const MetricsReport& a, const MetricsReport& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].si_sdr_db != b.rows[i].si_sdr_db ||
        a.rows[i].delta_si_sdr_db != b.rows[i].delta_si_sdr_db ||
        a.rows[i].delta_fwsegsnr_db != b.rows[i].delta_fwsegsnr_db) {
      return false;
    }
  }
  return true;
}

void criterion_11(Outcome& o) {
  test::ToyFixture toy;
  const std::vector<ManifestRow> rows(toy.rows.begin(), toy.rows.begin() + 4);
  auto conditioned = Pipeline::from_models(assemble_topology(smoke_config(Topology::kDisCoGan, 1, 11)));
  const auto base = evaluate_system(conditioned, rows);
  const auto shift = ablate_frame_shift(conditioned, rows, {0}, ShiftDirection::kNonCausal);
  const auto cond = ablate_condition_snr(conditioned, rows, {ConditionLevel::matching()});
  o.require(rows_identical(shift.entries[0].report, base), "k1 = 0 reproduces the metrics");
  o.require(rows_identical(cond.entries[0].report, base), "matching SNR reproduces the metrics");
  const auto item = render_item(rows[0]);
  auto x = to_tensor(item.mixture).unsqueeze(0);
  const auto plain = conditioned.enhance(x);
  EnhanceOptions zero_shift;
  zero_shift.latent_transform = [](const torch::Tensor& d) {
    return shift_frames(d, 0, ShiftDirection::kNonCausal);
  };
  EnhanceOptions matching;
  matching.conditioning_input = to_tensor(conditioning_signal(item, ConditionLevel::matching())).unsqueeze(0);
  o.require(torch::equal(plain, conditioned.enhance(x, zero_shift)), "k1 = 0 output bit-exact");
  o.require(torch::equal(plain, conditioned.enhance(x, matching)), "matching output bit-exact");

  auto nocogan = Pipeline::from_models(assemble_topology(smoke_config(Topology::kNoCoGan, 1, 11)));
  const auto report = ablate_components({{"full", base},
                                         {"-disc-cond", evaluate_system(nocogan, rows)},
                                         {"identity", evaluate_system(Pipeline::identity(), rows)}});
  const auto& full = report.rows[0];
  o.require(full.pct_fwsegsnr == 0.0 && full.pct_si_sdr == 0.0, "full row is 0%");
  for (const auto& r : report.rows) {
    const double fw = (r.delta_fwsegsnr_db - full.delta_fwsegsnr_db) / std::abs(full.delta_fwsegsnr_db) * 100;
    const double sd = (r.delta_si_sdr_db - full.delta_si_sdr_db) / std::abs(full.delta_si_sdr_db) * 100;
    o.require(r.pct_fwsegsnr && std::abs(*r.pct_fwsegsnr - fw) <= 1e-12 * std::max(1.0, std::abs(fw)),
              r.variant + " FwSegSNR percentage");
    o.require(r.pct_si_sdr && std::abs(*r.pct_si_sdr - sd) <= 1e-12 * std::max(1.0, std::abs(sd)),
              r.variant + " SI-SDR percentage");
  }
  auto fixture = [](double fw, double sd) {
    MetricsReport r;
    r.rows = {{"a", "g", 0.0, 0.0, fw, sd}};
    r.groups = group_means(r.rows);
    return r;
  };
  const auto table = ablate_components({{"full", fixture(5.0, 1.22)}, {"-disc-cond", fixture(4.105, 1.10044)}});
  o.require(std::abs(*table.rows[1].pct_fwsegsnr + 17.9) < 1e-9 &&
                std::abs(*table.rows[1].pct_si_sdr + 9.8) < 1e-9,
            "-17.9% / -9.8% fixture");
  o.detail << report.rows.size() << " component rows recomputed ";
}

void criterion_12(Outcome& o) {
  std::mt19937_64 rng(12);
  double worst_scale = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto s = test::random_signal(rng, 1000);
    auto e = test::random_signal(rng, 1000);
    for (std::size_t i = 0; i < s.size(); ++i) e[i] = 0.6f * s[i] + 0.4f * e[i];
    const double base = si_sdr(s, e);
    for (float a : {0.25f, 0.5f, 2.0f, 8.0f}) {
      std::vector<float> scaled(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) scaled[i] = a * e[i];
      worst_scale = std::max(worst_scale, std::abs(si_sdr(s, scaled) - base));
    }
  }
  o.require(worst_scale <= 1e-9, "scale invariance 1e-9");

  // Orthogonal error: paired reference samples against an alternating error.
  std::normal_distribution<double> g(0.0, 1.0);
  const std::size_t n = 4000;
  std::vector<double> s(n), e(n);
  double ss = 0, ee = 0;
  for (std::size_t m = 0; m < n / 2; ++m) {
    s[2 * m] = s[2 * m + 1] = g(rng);
    e[2 * m] = g(rng);
    e[2 * m + 1] = -e[2 * m];
    ss += 2 * s[2 * m] * s[2 * m];
    ee += 2 * e[2 * m] * e[2 * m];
  }
  const double scale = std::sqrt(0.1 * ss / ee);
  std::vector<float> ref(n), est(n);
  for (std::size_t i = 0; i < n; ++i) {
    ref[i] = static_cast<float>(s[i]);
    est[i] = static_cast<float>(s[i] + scale * e[i]);
  }
  const double ten = si_sdr(ref, est);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", ten);
  o.require(std::string(buf) == "10.00", "orthogonal case reads 10.00 dB");

  double worst_corr = 0;
  std::uniform_int_distribution<int> coarse(0, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const int64_t frames = 2 + trial * 2, dims = 1 + trial % 5;
    auto a = torch::randn({1, frames, dims}, torch::kFloat64);
    auto b = a * 0.5 + torch::randn({1, frames, dims}, torch::kFloat64);
    if (trial % 2) {
      // Coarse values force ties for the rank correlation.
      a = torch::randint(0, 4, {1, frames, dims}, torch::kFloat64);
      b = a + torch::randint(0, 3, {1, frames, dims}, torch::kFloat64);
    }
    const auto x = flatten_latent(a), y = flatten_latent(b);
    const auto c = correlate_latents(a, b);
    if (!c.pearson || !c.spearman) continue;
    worst_corr = std::max(worst_corr, std::abs(*c.pearson - test::brute_pearson(x, y)));
    worst_corr = std::max(worst_corr, std::abs(*c.spearman - test::brute_pearson(test::brute_ranks(x),
                                                                                 test::brute_ranks(y))));
  }
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x(1000), y(1000);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = trial % 2 ? coarse(rng) : g(rng);
      y[i] = x[i] + (trial % 2 ? coarse(rng) : g(rng));
    }
    worst_corr = std::max(worst_corr, std::abs(*pearson(x, y) - test::brute_pearson(x, y)));
    worst_corr = std::max(worst_corr, std::abs(*spearman(x, y) - test::brute_pearson(test::brute_ranks(x),
                                                                                     test::brute_ranks(y))));
  }
  o.require(worst_corr <= 1e-9, "correlation within 1e-9");
  o.detail << "scale dev " << worst_scale << ", orthogonal " << ten << " dB, corr dev " << worst_corr << " ";
}

void criterion_13(Outcome& o) {
  TempDir dir("acc-determinism");
  const auto cfg = smoke_config(Topology::kDisCoGan, 50, 13);
  const auto data = test::synthetic_data(4, 13);
  GanTrainer a(cfg, data, dir / "a"), b(cfg, data, dir / "b");
  const auto ra = a.run(), rb = b.run();
  bool same = ra.size() == 50 && rb.size() == 50;
  for (std::size_t i = 0; same && i < ra.size(); ++i) same = format_log_row(ra[i]) == format_log_row(rb[i]);
  o.require(same, "in-memory rows identical");
  auto lines = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
  };
  const auto la = lines(dir / "a" / "log.csv"), lb = lines(dir / "b" / "log.csv");
  o.require(la.size() == 51 && la == lb, "log.csv files identical");
  o.detail << ra.size() << " rows compared ";
}

}  // namespace
}  // namespace discogan::acceptance

int main(int argc, char** argv) {
  using namespace discogan::acceptance;
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"STFT round trip > 60 dB", criterion_1},
      {"mixing within 0.01 dB", criterion_2},
      {"lookahead mask semantics", criterion_3},
      {"loss oracles and hinge examples", criterion_4},
      {"finite-difference gradients", criterion_5},
      {"weighted-sum identity", criterion_6},
      {"paper shape contracts", criterion_7},
      {"frozen extractor over 1000 steps", criterion_8},
      {"single-batch overfit smoke", criterion_9},
      {"topology differentiation", criterion_10},
      {"ablation plumbing", criterion_11},
      {"metric correctness", criterion_12},
      {"log determinism", criterion_13}};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    const auto t0 = Clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "] ";
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << criteria[i].first
              << " | " << o.detail.str() << "(" << seconds_since(t0) << " s)" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
