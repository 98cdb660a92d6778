// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <torch/torch.h>

#include <vector>

#include <json.hpp>

#include "discogan/layers.h"
#include "discogan/stft.h"

namespace discogan {

struct DiscriminatorConfig {
  std::vector<int> windows{2048, 1024, 512};
  int64_t input_channels = 32;
  int64_t max_channels = 256;
  std::vector<int64_t> dilations{1, 2, 4};
  // Frequency extent of the dilated convs; time extent is 3.
  int64_t dilated_freq_kernel = 9;
  double leaky_slope = 0.2;

  void validate() const;
  // Window w analysed with fft w and hop w / 4, full onesided spectrum.
  StftConfig scale(std::size_t k) const;
  int max_window() const;
  // Feature tensors per scale: input conv, each dilated conv.
  std::size_t layer_count() const { return 1 + dilations.size(); }

  nlohmann::json to_json() const;
  static DiscriminatorConfig from_json(const nlohmann::json& j);
  bool operator==(const DiscriminatorConfig&) const = default;

  static DiscriminatorConfig paper();
  static DiscriminatorConfig desk();
};

struct DiscriminatorOutput {
  std::vector<torch::Tensor> logits;                 // per scale [B, 1, T_k, F'_k]
  std::vector<std::vector<torch::Tensor>> features;  // per scale, L tensors, input to output
};

// One sub-network over [B, 2, T, F] (real, imag) spectra.
class ScaleDiscriminatorImpl : public torch::nn::Module {
 public:
  ScaleDiscriminatorImpl(const DiscriminatorConfig& cfg, const StftConfig& stft);
  // wav [B, N] -> logits and the post-activation features of each hidden conv.
  std::pair<torch::Tensor, std::vector<torch::Tensor>> forward(const torch::Tensor& wav);

 private:
  StftConfig stft_;
  double slope_;
  torch::nn::ModuleList convs_;
  WnConv2d out_conv_{nullptr};
};
TORCH_MODULE(ScaleDiscriminator);

class DiscriminatorBankImpl : public torch::nn::Module {
 public:
  explicit DiscriminatorBankImpl(const DiscriminatorConfig& cfg);
  // wav [B, N] with N >= the largest window; throws InvalidInput otherwise.
  DiscriminatorOutput forward(const torch::Tensor& wav);
  const DiscriminatorConfig& config() const { return cfg_; }

 private:
  DiscriminatorConfig cfg_;
  torch::nn::ModuleList subnets_;
};
TORCH_MODULE(DiscriminatorBank);

}  // namespace discogan
