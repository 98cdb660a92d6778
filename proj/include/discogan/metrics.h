// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "discogan/audio.h"

namespace discogan {

inline constexpr double kSiSdrCapDb = 100.0;

// 10 log10(||a s||^2 / ||a s - s_hat||^2), a = <s_hat, s> / ||s||^2, limited to
// [-100, 100] dB. Silent reference -> DegenerateInput.
double si_sdr(std::span<const float> reference, std::span<const float> estimate);
double si_sdr(const AudioBuffer& reference, const AudioBuffer& estimate);

struct FwSegSnrConfig {
  int frame_length = 400;  // 25 ms
  int frame_shift = 160;   // 10 ms
  int fft_length = 512;
  int num_bands = 23;
  double weight_exponent = 0.2;
  double min_db = -10.0;
  double max_db = 35.0;
  double activity_range_db = 40.0;
};

// Mel-band weighted segmental SNR averaged over speech-active reference frames.
// No active frame -> DegenerateInput.
double fw_seg_snr(std::span<const float> reference, std::span<const float> estimate,
                  const FwSegSnrConfig& cfg = {});
double fw_seg_snr(const AudioBuffer& reference, const AudioBuffer& estimate,
                  const FwSegSnrConfig& cfg = {});

// Undefined (constant input) -> nullopt.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);
// Pearson correlation of average ranks.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);
// 1-based ranks with ties sharing their mean rank.
std::vector<double> average_ranks(std::span<const double> x);

}  // namespace discogan
