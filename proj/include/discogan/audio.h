// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <torch/torch.h>

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace discogan {

inline constexpr int kSampleRate = 16000;

// Mono waveform, linear amplitude.
struct AudioBuffer {
  std::vector<float> samples;
  int sample_rate = kSampleRate;

  AudioBuffer() = default;
  explicit AudioBuffer(std::vector<float> s, int rate = kSampleRate)
      : samples(std::move(s)), sample_rate(rate) {}

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  std::span<const float> view() const { return samples; }
};

// Throws InvalidInput unless the buffer is a finite 16 kHz signal.
void check_pipeline_audio(const AudioBuffer& audio);

// 1-D tensor copy of the samples.
torch::Tensor to_tensor(const AudioBuffer& audio,
                        torch::Dtype dtype = torch::kFloat32);
// Accepts a 1-D tensor or a [1, N] tensor.
AudioBuffer from_tensor(const torch::Tensor& wav, int sample_rate = kSampleRate);

double mean_power(std::span<const float> x);

enum class WavEncoding { kPcm16, kFloat32 };

// RIFF/WAVE, mono, little-endian. Reading accepts 16-bit PCM and 32-bit
// float (plain or WAVE_FORMAT_EXTENSIBLE).
AudioBuffer read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const AudioBuffer& audio,
               WavEncoding encoding = WavEncoding::kPcm16);

}  // namespace discogan
