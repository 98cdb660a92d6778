// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <torch/torch.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <unistd.h>

#include "discogan/audio.h"
#include "discogan/dataset.h"
#include "discogan/metrics.h"
#include "discogan/toy_corpus.h"
#include "discogan/training.h"

namespace discogan::test {

namespace fs = std::filesystem;

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("discogan-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  fs::path path_;
};

inline std::vector<float> random_signal(std::mt19937_64& rng, std::size_t n, double scale = 0.5) {
  std::normal_distribution<double> dist(0.0, scale);
  std::vector<float> x(n);
  for (auto& v : x) v = static_cast<float>(std::clamp(dist(rng), -1.0, 1.0));
  return x;
}

// 10 log10(||x||^2 / ||x - y||^2) in float64.
inline double snr_db(const torch::Tensor& reference, const torch::Tensor& estimate) {
  auto r = reference.to(torch::kFloat64);
  auto e = estimate.to(torch::kFloat64);
  const double num = r.pow(2).sum().item<double>();
  const double den = (r - e).pow(2).sum().item<double>();
  return 10.0 * std::log10(num / den);
}

inline double max_abs_diff(const torch::Tensor& a, const torch::Tensor& b) {
  return (a.to(torch::kFloat64) - b.to(torch::kFloat64)).abs().max().item<double>();
}

inline bool bit_equal(const torch::Tensor& a, const torch::Tensor& b) {
  return a.sizes() == b.sizes() && a.scalar_type() == b.scalar_type() && torch::equal(a, b);
}

// Mean SI-SDR over the rows of [B, N] tensors.
inline double batch_si_sdr(const torch::Tensor& reference, const torch::Tensor& estimate) {
  double total = 0.0;
  for (int64_t b = 0; b < reference.size(0); ++b) {
    auto r = reference[b].to(torch::kFloat32).contiguous();
    auto e = estimate[b].to(torch::kFloat32).contiguous();
    total += si_sdr(std::span<const float>(r.data_ptr<float>(), r.numel()),
                    std::span<const float>(e.data_ptr<float>(), e.numel()));
  }
  return total / static_cast<double>(reference.size(0));
}

// Central finite difference of f with respect to element `index` of the
// flattened `param`, which is perturbed in place and restored.
inline double finite_difference(torch::Tensor param, int64_t index,
                                const std::function<double()>& f, double h = 1e-6) {
  torch::NoGradGuard no_grad;
  auto flat = param.view({-1});
  const double orig = flat[index].item<double>();
  flat[index].fill_(orig + h);
  const double up = f();
  flat[index].fill_(orig - h);
  const double down = f();
  flat[index].fill_(orig);
  return (up - down) / (2.0 * h);
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
}

// Toy corpus plus a desk manifest rendered into memory.
struct ToyFixture {
  TempDir dir{"toy"};
  ToyCorpus corpus;
  std::vector<ManifestRow> rows;

  ToyFixture(const std::string& preset = "desk-low-snr-eval", int clean = 10, int noise = 5,
             double seconds = 2.5, uint64_t seed = 1,
             std::optional<std::pair<double, double>> snr_range = std::nullopt) {
    corpus = write_toy_corpus(dir.path(), clean, noise, seconds, seed);
    auto spec = DatasetSpec::preset(preset);
    if (snr_range) {
      spec.snr_lo_db = snr_range->first;
      spec.snr_hi_db = snr_range->second;
      spec.groups.clear();
    }
    rows = synthesize_dataset(corpus.clean_dir, corpus.noise_dir, spec, 1);
  }
};

// Harmonic "speech" plus white noise, one second per item.
inline TrainingData synthetic_data(int items, uint64_t seed, int64_t n = 16000) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::uniform_real_distribution<double> f0(100.0, 300.0);
  std::vector<RenderedItem> out;
  for (int i = 0; i < items; ++i) {
    RenderedItem item;
    const double f = f0(rng);
    for (int64_t t = 0; t < n; ++t) {
      const double s = 0.3 * std::sin(2 * std::numbers::pi * f * t / kSampleRate) +
                       0.1 * std::sin(2 * std::numbers::pi * 3 * f * t / kSampleRate);
      const double v = noise(rng);
      item.clean.samples.push_back(static_cast<float>(s));
      item.noise.samples.push_back(static_cast<float>(v));
      item.mixture.samples.push_back(static_cast<float>(s + v));
    }
    out.push_back(std::move(item));
  }
  return TrainingData(std::move(out));
}

}  // namespace discogan::test
