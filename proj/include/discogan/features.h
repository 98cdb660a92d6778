// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <torch/torch.h>

#include "discogan/audio.h"
#include "discogan/stft.h"

namespace discogan {

// Floor for |X| in the log-magnitude channel and in the phase division.
// At |X| <= kMagFloor the phase channels are 0.
inline constexpr double kMagFloor = 1e-8;

// Three real channels per time-frequency bin: log|X|, Re X/|X|, Im X/|X|.
struct FeatureTensor {
  torch::Tensor values;  // [3, F, T]
};

// spec: complex [F, T] or [B, F, T] -> real [3, F, T] or [B, 3, F, T].
torch::Tensor pack_features(const torch::Tensor& spec);
FeatureTensor pack_features(const ComplexSpectrogram& spec);

// log(1 + e^x) without overflow for large x.
torch::Tensor softplus(const torch::Tensor& x);
torch::Tensor inverse_softplus(const torch::Tensor& y);

// Generator head [.., 3, F, T] -> complex spectrum softplus(m) * (r + j i).
torch::Tensor head_to_spectrum(const torch::Tensor& head);

// head: [3, F, T] or [B, 3, F, T]; returns [N] or [B, N].
torch::Tensor reconstruct(const torch::Tensor& head, const StftConfig& cfg,
                          int64_t num_samples);
AudioBuffer reconstruct(const FeatureTensor& head, const StftConfig& cfg,
                        int64_t num_samples);

}  // namespace discogan
