// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/stft.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "discogan/errors.h"

namespace discogan {

std::string to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::kHannPeriodic:
      return "hann";
    case WindowKind::kRectangular:
      return "rect";
  }
  return "unknown";
}

WindowKind window_kind_from_string(const std::string& name) {
  if (name == "hann") return WindowKind::kHannPeriodic;
  if (name == "rect") return WindowKind::kRectangular;
  throw InvalidConfig("unknown window kind '" + name + "'");
}

void StftConfig::validate() const {
  if (fft_length <= 0 || window_length <= 0 || hop_length <= 0) {
    throw InvalidConfig("STFT lengths must be positive");
  }
  if (!(hop_length <= window_length && window_length <= fft_length)) {
    throw InvalidConfig("STFT requires hop <= window <= fft (got hop " +
                        std::to_string(hop_length) + ", window " +
                        std::to_string(window_length) + ", fft " +
                        std::to_string(fft_length) + ")");
  }
}

bool StftConfig::invertible() const {
  auto w = make_window(*this, torch::kFloat64);
  auto acc = w.accessor<double, 1>();
  // Steady-state envelope is hop-periodic; check every phase.
  for (int r = 0; r < hop_length; ++r) {
    double env = 0.0;
    for (int n = r; n < window_length; n += hop_length) env += acc[n] * acc[n];
    if (env < 1e-10) return false;
  }
  return true;
}

StftConfig StftConfig::generator() {
  StftConfig cfg;
  cfg.fft_length = 512;
  cfg.window_length = 512;
  cfg.hop_length = 160;
  cfg.drop_nyquist = true;
  return cfg;
}

StftConfig StftConfig::resolution(int window_length) {
  StftConfig cfg;
  cfg.fft_length = window_length;
  cfg.window_length = window_length;
  cfg.hop_length = window_length / 4;
  return cfg;
}

torch::Tensor make_window(const StftConfig& cfg, torch::Dtype dtype) {
  auto opts = torch::TensorOptions().dtype(dtype);
  switch (cfg.window) {
    case WindowKind::kHannPeriodic:
      return torch::hann_window(cfg.window_length, /*periodic=*/true, opts);
    case WindowKind::kRectangular:
      return torch::ones({cfg.window_length}, opts);
  }
  throw InvalidConfig("unknown window kind");
}

torch::Tensor stft(const torch::Tensor& wav, const StftConfig& cfg) {
  cfg.validate();
  if (wav.numel() == 0 || wav.size(-1) == 0) throw InvalidInput("stft of empty audio");
  if (wav.dim() != 1 && wav.dim() != 2) {
    throw InvalidInput("stft expects [N] or [B, N] waveforms");
  }
  auto window = make_window(cfg, wav.scalar_type());
  auto spec = torch::stft(wav, cfg.fft_length, cfg.hop_length, cfg.window_length,
                          window, /*center=*/true, /*pad_mode=*/"constant",
                          /*normalized=*/false, /*onesided=*/true,
                          /*return_complex=*/true);
  if (cfg.drop_nyquist) spec = spec.narrow(-2, 0, cfg.fft_length / 2);
  return spec;
}

torch::Tensor istft(const torch::Tensor& spec, const StftConfig& cfg, int64_t length) {
  cfg.validate();
  if (!cfg.invertible()) {
    throw InvalidConfig("STFT config is not invertible by overlap-add (hop " +
                        std::to_string(cfg.hop_length) + ", window " +
                        std::to_string(cfg.window_length) + ")");
  }
  if (!spec.is_complex()) throw InvalidInput("istft expects a complex spectrogram");
  if (spec.size(-2) != cfg.num_bins()) {
    throw InvalidInput("istft: spectrogram has " + std::to_string(spec.size(-2)) +
                       " bins, config expects " + std::to_string(cfg.num_bins()));
  }
  auto full = spec;
  if (cfg.drop_nyquist) {
    std::vector<int64_t> pad_shape = spec.sizes().vec();
    pad_shape[pad_shape.size() - 2] = 1;
    full = torch::cat({spec, torch::zeros(pad_shape, spec.options())}, -2);
  }
  auto window = make_window(cfg, c10::toRealValueType(spec.scalar_type()));
  return torch::istft(full, cfg.fft_length, cfg.hop_length, cfg.window_length, window,
                      /*center=*/true, /*normalized=*/false, /*onesided=*/true,
                      length, /*return_complex=*/false);
}

ComplexSpectrogram stft(const AudioBuffer& audio, const StftConfig& cfg) {
  if (audio.empty()) throw InvalidInput("stft of empty audio");
  ComplexSpectrogram out;
  out.bins = stft(to_tensor(audio, torch::kFloat64), cfg);
  out.config = cfg;
  out.num_samples = static_cast<int64_t>(audio.size());
  return out;
}

AudioBuffer istft(const ComplexSpectrogram& spec) {
  return from_tensor(istft(spec.bins, spec.config, spec.num_samples));
}

}  // namespace discogan
