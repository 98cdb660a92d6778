// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <torch/torch.h>

#include <vector>

#include <json.hpp>

#include "discogan/audio.h"
#include "discogan/discriminator.h"

namespace discogan {

struct LossWeights {
  double time = 1.0;
  double freq = 1.0;
  double adv = 1.0 / 9.0;
  double feat = 100.0 / 9.0;

  // Throws InvalidConfig on negative or non-finite weights.
  void validate() const;
  nlohmann::json to_json() const;
  static LossWeights from_json(const nlohmann::json& j);
  bool operator==(const LossWeights&) const = default;
};

// Resolutions 2^i for i in exponents, hop 2^i / 4.
struct SpectralResolutionSet {
  std::vector<int> exponents{5, 6, 7, 8, 9, 10};
  double fmin = 0.0;
  double fmax = 8000.0;
  double log_floor = 1e-5;

  void validate() const;
  int max_window() const;
  // max(5, 2^i / 8)
  static int mel_bins(int exponent);
};

struct LossReport {
  double l_t = 0, l_f = 0, l_adv = 0, l_feat = 0, l_d = 0, total_g = 0;
};

// Slaney-scale triangular filters, [n_mels, n_fft / 2 + 1]. With area_norm
// each filter is scaled by 2 / bandwidth; otherwise filters peak at 1.
torch::Tensor mel_filterbank(int n_fft, int n_mels, double fmin, double fmax,
                             int sample_rate = kSampleRate,
                             torch::Dtype dtype = torch::kFloat32, bool area_norm = true);
double hz_to_mel_slaney(double hz);
double mel_to_hz_slaney(double mel);

// Waveforms are [B, N] (or [N]); every loss returns a scalar tensor.
torch::Tensor loss_time(const torch::Tensor& clean, const torch::Tensor& estimate);
torch::Tensor loss_freq(const torch::Tensor& clean, const torch::Tensor& estimate,
                        const SpectralResolutionSet& res = {});
torch::Tensor loss_adv_generator(const DiscriminatorOutput& fake);
torch::Tensor loss_discriminator(const DiscriminatorOutput& real, const DiscriminatorOutput& fake);
torch::Tensor loss_feature_matching(const DiscriminatorOutput& real,
                                    const DiscriminatorOutput& fake);

double loss_time(const AudioBuffer& clean, const AudioBuffer& estimate);
double loss_freq(const AudioBuffer& clean, const AudioBuffer& estimate,
                 const SpectralResolutionSet& res = {});

// l_t λ_t + l_f λ_f + λ_adv l_adv + λ_feat l_feat
double total_generator_loss(const LossReport& parts, const LossWeights& w);
torch::Tensor total_generator_loss(const torch::Tensor& l_t, const torch::Tensor& l_f,
                                   const torch::Tensor& l_adv, const torch::Tensor& l_feat,
                                   const LossWeights& w);

}  // namespace discogan
