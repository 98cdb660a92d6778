// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <torch/torch.h>

#include <cstdint>

#include <json.hpp>

namespace discogan {

// Time-indexed feature matrix [T, d] (a leading batch dimension is allowed
// wherever the tensor API is used).
struct LatentSequence {
  torch::Tensor values;
  double frame_hop_seconds = 0.01;

  int64_t frames() const { return values.size(-2); }
  int64_t width() const { return values.size(-1); }
};

struct ConditionerConfig {
  int64_t disc_dim = 1024;   // width of the discriminative latent
  int64_t latent_dim = 128;  // width of the generator latent
  int64_t num_heads = 2;
  int64_t lookahead = 20;    // frames of future context

  void validate() const;
  nlohmann::json to_json() const;
  static ConditionerConfig from_json(const nlohmann::json& j);
  bool operator==(const ConditionerConfig&) const = default;
};

// Linear interpolation onto target_frames frames; both grids span normalised
// time [0, 1] with the first and last frames on the endpoints.
torch::Tensor align_time(const torch::Tensor& latent, int64_t target_frames);
LatentSequence align_time(const LatentSequence& latent, int64_t target_frames,
                          double target_hop_seconds);

// Additive mask [T, T]: 0 where p <= q <= min(p + L, T - 1), -inf elsewhere.
torch::Tensor build_mask(int64_t frames, int64_t lookahead,
                         torch::TensorOptions opts = torch::kFloat32);

struct AttentionResult {
  torch::Tensor output;   // [B, T, d_g]
  torch::Tensor weights;  // [B, heads, T, T], rows sum to one
};

// Fuses a discriminative latent into the generator latent:
//   D~ = D W_d + b_d                      (same W_d, b_d at every frame)
//   G_DL = MHA(Q = G W_Q, K = D~ W_K, V = D~ W_V, mask) W_O
//   Z = [G, G_DL]
// Each head scales its scores by 1 / sqrt(d_g / heads).
class ConditionerImpl : public torch::nn::Module {
 public:
  explicit ConditionerImpl(const ConditionerConfig& cfg);

  // [.., T, d_d] -> [.., T, d_g]
  torch::Tensor project(const torch::Tensor& disc) const;
  AttentionResult cross_attend(const torch::Tensor& gen, const torch::Tensor& disc_projected) const;
  // gen: [B, T, d_g]; disc: [B, T_d, d_d] at any frame rate. Returns [B, T, 2 d_g].
  torch::Tensor condition(const torch::Tensor& gen, const torch::Tensor& disc) const;

  const ConditionerConfig& config() const { return cfg_; }

  torch::Tensor proj_weight, proj_bias;
  torch::Tensor w_q, w_k, w_v, w_o;

 private:
  ConditionerConfig cfg_;
};
TORCH_MODULE(Conditioner);

}  // namespace discogan
