// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <torch/torch.h>

#include <optional>
#include <vector>

#include <json.hpp>

#include "discogan/conditioner.h"
#include "discogan/layers.h"
#include "discogan/stft.h"

namespace discogan {

// Kernel given as (frames, bins).
struct KernelTF {
  int64_t time = 1;
  int64_t freq = 1;
  bool operator==(const KernelTF&) const = default;
};

// How decoder block n sees encoder block n.
enum class SkipMode { kFilm, kAdditive, kNone };

std::string to_string(SkipMode mode);
SkipMode skip_mode_from_string(const std::string& name);

struct GeneratorConfig {
  int64_t base_channels = 32;
  int64_t max_channels = 512;
  int64_t num_blocks = 8;
  int64_t freq_stride = 2;
  int64_t latent_dim = 128;
  int64_t lstm_layers = 2;
  int64_t lstm_units = 512;
  KernelTF input_kernel{2, 4};
  KernelTF residual_kernel{3, 3};
  int64_t freq_dilation = 2;
  int64_t input_bins = 256;
  int64_t film_reduction = 8;
  int64_t latent_kernel = 3;
  SkipMode skip_mode = SkipMode::kFilm;
  // Present for conditioned generators; its latent_dim mirrors latent_dim.
  std::optional<ConditionerConfig> conditioning;

  void validate() const;
  // Channels entering block n for n = 0..num_blocks (last = bottleneck).
  std::vector<int64_t> channel_schedule() const;
  // Bins seen by block n for n = 0..num_blocks.
  std::vector<int64_t> bin_schedule() const;
  int64_t decoder_input_width() const {
    return conditioning ? 2 * latent_dim : latent_dim;
  }
  StftConfig stft() const { return StftConfig::generator(); }

  nlohmann::json to_json() const;
  static GeneratorConfig from_json(const nlohmann::json& j);
  bool operator==(const GeneratorConfig&) const = default;

  static GeneratorConfig paper();
  // Same topology with narrower layers.
  static GeneratorConfig desk();
  GeneratorConfig with_conditioning(int64_t disc_dim) const;
  GeneratorConfig without_conditioning() const;
};

// x + conv2(elu(conv1(elu(x)))), conv2 dilated along frequency.
class ResidualUnitImpl : public torch::nn::Module {
 public:
  ResidualUnitImpl(int64_t channels, KernelTF kernel, int64_t freq_dilation);
  torch::Tensor forward(const torch::Tensor& x);

 private:
  WnConv2d conv1_{nullptr}, conv2_{nullptr};
};
TORCH_MODULE(ResidualUnit);

struct FilmTerms {
  torch::Tensor gamma;      // ReLU(conv_gamma(E)) >= 0, [B, C, F, T]
  torch::Tensor beta;       // Sigmoid(conv_beta(E)) in (0, 1), [B, C, F, T]
  torch::Tensor attention;  // [B, 1, F, T] in (0, 1)
};

// out = D + (gamma * A * D + beta * A), A broadcast over channels.
torch::Tensor film_modulate(const torch::Tensor& decoder_feat, const FilmTerms& terms);

class FilmLayerImpl : public torch::nn::Module {
 public:
  FilmLayerImpl(int64_t channels, int64_t reduction);
  FilmTerms terms(const torch::Tensor& encoder_feat);
  torch::Tensor forward(const torch::Tensor& decoder_feat, const torch::Tensor& encoder_feat);

 private:
  WnConv2d conv_gamma_{nullptr}, conv_beta_{nullptr};
  WnConv2d attn_reduce_{nullptr}, attn_expand_{nullptr};
};
TORCH_MODULE(FilmLayer);

struct EncoderState {
  std::vector<torch::Tensor> skips;  // E_n: [B, C_n, F_n, T]
  torch::Tensor bottleneck;          // [B, C_max, 1, T] before the LSTM
  torch::Tensor latent;              // G_L: [B, T, d_g]
};

// Time-frequency encoder/decoder over [B, C, F, T] tensors. When configured
// with conditioning, the bottleneck latent is fused with a discriminative
// latent before decoding.
class GeneratorImpl : public torch::nn::Module {
 public:
  explicit GeneratorImpl(const GeneratorConfig& cfg);

  // features: [B, 3, F, T]
  EncoderState encode(const torch::Tensor& features);
  // latent: [B, T, d_g] or [B, T, 2 d_g]; returns the head [B, 3, F, T].
  torch::Tensor decode(const EncoderState& state, const torch::Tensor& latent);
  // [B, T, d_g] -> [B, T, 2 d_g]; requires conditioning.
  torch::Tensor condition(const torch::Tensor& gen_latent, const torch::Tensor& disc_latent);

  // wav: [B, N]. disc_latent: [B, T_d, d_d] for conditioned generators,
  // undefined otherwise. Returns [B, N].
  torch::Tensor forward(const torch::Tensor& wav, const torch::Tensor& disc_latent = {});

  const GeneratorConfig& config() const { return cfg_; }
  bool conditioned() const { return cfg_.conditioning.has_value(); }
  Conditioner conditioner() const { return conditioner_; }

 private:
  GeneratorConfig cfg_;
  WnConv2d input_conv_{nullptr};
  torch::nn::ModuleList enc_res_, enc_down_, dec_up_, dec_res_, film_;
  torch::nn::LSTM lstm_{nullptr};
  WnConv1d latent_out_{nullptr}, latent_in_{nullptr};
  WnConv2d output_conv_{nullptr};
  Conditioner conditioner_{nullptr};
};
TORCH_MODULE(Generator);

}  // namespace discogan
