// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/features.h"

#include "discogan/errors.h"

namespace discogan {

torch::Tensor pack_features(const torch::Tensor& spec) {
  if (!spec.is_complex()) throw InvalidInput("pack_features expects a complex spectrogram");
  auto re = torch::real(spec);
  auto im = torch::imag(spec);
  auto mag = torch::abs(spec);
  auto active = mag > kMagFloor;
  auto denom = mag.clamp_min(kMagFloor);
  auto zero = torch::zeros_like(re);
  auto log_mag = torch::log(denom);
  auto cos_ch = torch::where(active, re / denom, zero);
  auto sin_ch = torch::where(active, im / denom, zero);
  return torch::stack({log_mag, cos_ch, sin_ch}, spec.dim() - 2);
}

FeatureTensor pack_features(const ComplexSpectrogram& spec) {
  return {pack_features(spec.bins)};
}

torch::Tensor softplus(const torch::Tensor& x) {
  return torch::clamp_min(x, 0) + torch::log1p(torch::exp(-torch::abs(x)));
}

torch::Tensor inverse_softplus(const torch::Tensor& y) {
  // log(e^y - 1) = y + log(1 - e^-y)
  return y + torch::log(-torch::expm1(-y));
}

torch::Tensor head_to_spectrum(const torch::Tensor& head) {
  if (head.dim() < 3 || head.size(-3) != 3) {
    throw InvalidInput("generator head must have 3 channels in dimension -3");
  }
  auto mag = discogan::softplus(head.select(-3, 0));
  auto re = head.select(-3, 1);
  auto im = head.select(-3, 2);
  return torch::complex(mag * re, mag * im);
}

torch::Tensor reconstruct(const torch::Tensor& head, const StftConfig& cfg,
                          int64_t num_samples) {
  if (head.dim() < 3 || head.size(-3) != 3 || head.size(-2) != cfg.num_bins()) {
    throw InvalidInput("reconstruct: head shape does not match 3 x " +
                       std::to_string(cfg.num_bins()) + " x T");
  }
  return istft(head_to_spectrum(head), cfg, num_samples);
}

AudioBuffer reconstruct(const FeatureTensor& head, const StftConfig& cfg,
                        int64_t num_samples) {
  return from_tensor(reconstruct(head.values, cfg, num_samples));
}

}  // namespace discogan
