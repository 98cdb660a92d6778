// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <torch/torch.h>

#include <cstdint>
#include <string>

#include "discogan/audio.h"

namespace discogan {

enum class WindowKind { kHannPeriodic, kRectangular };

std::string to_string(WindowKind kind);
WindowKind window_kind_from_string(const std::string& name);

// Short-time Fourier transform framing. Frames are centred (the signal is
// zero-padded by fft_length / 2 on both sides), so a signal of N samples
// yields 1 + floor(N / hop_length) frames.
struct StftConfig {
  int fft_length = 512;
  int window_length = 512;
  int hop_length = 160;
  WindowKind window = WindowKind::kHannPeriodic;
  // Discard the Nyquist bin so that fft_length / 2 bins remain.
  bool drop_nyquist = false;

  int num_bins() const { return fft_length / 2 + (drop_nyquist ? 0 : 1); }
  int64_t num_frames(int64_t num_samples) const {
    return 1 + num_samples / hop_length;
  }

  // Throws InvalidConfig unless hop <= window <= fft and all are positive.
  void validate() const;
  // Weighted overlap-add can invert the transform: the squared-window
  // envelope never vanishes.
  bool invertible() const;

  bool operator==(const StftConfig&) const = default;

  // 512/512/160 with 256 retained bins; feeds the generator.
  static StftConfig generator();
  // Square-window config of a given size with hop = size / 4.
  static StftConfig resolution(int window_length);
};

torch::Tensor make_window(const StftConfig& cfg,
                          torch::Dtype dtype = torch::kFloat32);

// wav: [N] or [B, N] real. Returns complex [F, T] or [B, F, T].
torch::Tensor stft(const torch::Tensor& wav, const StftConfig& cfg);
// spec: complex [F, T] or [B, F, T]. Throws InvalidConfig when the config
// is not invertible.
torch::Tensor istft(const torch::Tensor& spec, const StftConfig& cfg,
                    int64_t length);

struct ComplexSpectrogram {
  torch::Tensor bins;  // complex [F, T]
  StftConfig config;
  int64_t num_samples = 0;

  int64_t frames() const { return bins.size(-1); }
  int64_t freqs() const { return bins.size(-2); }
};

ComplexSpectrogram stft(const AudioBuffer& audio, const StftConfig& cfg);
AudioBuffer istft(const ComplexSpectrogram& spec);

}  // namespace discogan
