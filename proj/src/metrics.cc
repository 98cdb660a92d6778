// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/metrics.h"

#include <torch/torch.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "discogan/errors.h"
#include "discogan/losses.h"

namespace discogan {

double si_sdr(std::span<const float> reference, std::span<const float> estimate) {
  if (reference.size() != estimate.size()) {
    throw InvalidInput("si_sdr: reference and estimate differ in length (" +
                       std::to_string(reference.size()) + " vs " +
                       std::to_string(estimate.size()) + ")");
  }
  double ss = 0.0, se = 0.0;
  for (std::size_t n = 0; n < reference.size(); ++n) {
    ss += static_cast<double>(reference[n]) * reference[n];
    se += static_cast<double>(reference[n]) * estimate[n];
  }
  if (ss <= 0.0) throw DegenerateInput("si_sdr: reference is silent");
  const double alpha = se / ss;
  double target = 0.0, error = 0.0;
  for (std::size_t n = 0; n < reference.size(); ++n) {
    const double t = alpha * reference[n];
    const double e = t - estimate[n];
    target += t * t;
    error += e * e;
  }
  if (target <= 0.0) return -kSiSdrCapDb;
  if (error <= 0.0) return kSiSdrCapDb;
  return std::clamp(10.0 * std::log10(target / error), -kSiSdrCapDb, kSiSdrCapDb);
}

double si_sdr(const AudioBuffer& reference, const AudioBuffer& estimate) {
  return si_sdr(reference.view(), estimate.view());
}

namespace {

// [M, frame_length] frames without padding, as float64.
torch::Tensor frame_signal(std::span<const float> x, int length, int shift) {
  const auto count = static_cast<int64_t>((x.size() - length) / shift + 1);
  auto wav = torch::from_blob(const_cast<float*>(x.data()), {static_cast<int64_t>(x.size())},
                              torch::kFloat32)
                 .to(torch::kFloat64);
  return wav.unfold(0, length, shift).narrow(0, 0, count);
}

}  // namespace

double fw_seg_snr(std::span<const float> reference, std::span<const float> estimate,
                  const FwSegSnrConfig& cfg) {
  if (reference.size() != estimate.size()) {
    throw InvalidInput("fw_seg_snr: reference and estimate differ in length");
  }
  if (reference.size() < static_cast<std::size_t>(cfg.frame_length)) {
    throw DegenerateInput("fw_seg_snr: signal shorter than one frame");
  }
  torch::NoGradGuard no_grad;
  auto window = torch::hann_window(cfg.frame_length, /*periodic=*/true, torch::kFloat64);
  auto ref_frames = frame_signal(reference, cfg.frame_length, cfg.frame_shift);
  auto est_frames = frame_signal(estimate, cfg.frame_length, cfg.frame_shift);
  auto energy = (ref_frames * window).pow(2).sum(1);

  auto fb = mel_filterbank(cfg.fft_length, cfg.num_bands, 0.0, kSampleRate / 2.0, kSampleRate,
                           torch::kFloat64, /*area_norm=*/false);
  auto band = [&](const torch::Tensor& frames) {
    auto mag = torch::abs(torch::fft::rfft(frames * window, cfg.fft_length, 1));
    return torch::matmul(mag, fb.t());  // [M, bands]
  };
  auto ref_band = band(ref_frames).contiguous();
  auto est_band = band(est_frames).contiguous();

  const int64_t frames = ref_band.size(0), bands = ref_band.size(1);
  auto e = energy.accessor<double, 1>();
  auto rb = ref_band.accessor<double, 2>();
  auto eb = est_band.accessor<double, 2>();
  double peak = 0.0;
  for (int64_t m = 0; m < frames; ++m) peak = std::max(peak, e[m]);
  if (peak <= 0.0) throw DegenerateInput("fw_seg_snr: reference is silent");
  const double gate = peak * std::pow(10.0, -cfg.activity_range_db / 10.0);

  double sum = 0.0;
  int64_t active = 0;
  for (int64_t m = 0; m < frames; ++m) {
    if (!(e[m] > gate)) continue;
    double num = 0.0, den = 0.0;
    for (int64_t j = 0; j < bands; ++j) {
      const double r = rb[m][j];
      const double d = r - eb[m][j];
      double snr;
      if (d == 0.0) {
        snr = cfg.max_db;
      } else if (r == 0.0) {
        snr = cfg.min_db;
      } else {
        snr = std::clamp(10.0 * std::log10(r * r / (d * d)), cfg.min_db, cfg.max_db);
      }
      const double w = std::pow(r, cfg.weight_exponent);
      num += w * snr;
      den += w;
    }
    if (den <= 0.0) continue;
    sum += num / den;
    ++active;
  }
  if (active == 0) throw DegenerateInput("fw_seg_snr: no speech-active frames");
  return sum / static_cast<double>(active);
}

double fw_seg_snr(const AudioBuffer& reference, const AudioBuffer& estimate,
                  const FwSegSnrConfig& cfg) {
  return fw_seg_snr(reference.view(), estimate.view(), cfg);
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("pearson: length mismatch");
  if (x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("spearman: length mismatch");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

}  // namespace discogan
