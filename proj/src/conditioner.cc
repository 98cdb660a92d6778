// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/conditioner.h"

#include <cmath>
#include <limits>

#include "discogan/errors.h"

namespace discogan {

void ConditionerConfig::validate() const {
  if (disc_dim <= 0 || latent_dim <= 0) throw InvalidConfig("latent widths must be positive");
  if (num_heads <= 0 || latent_dim % num_heads != 0) {
    throw InvalidConfig("latent_dim " + std::to_string(latent_dim) +
                        " is not divisible by num_heads " + std::to_string(num_heads));
  }
  if (lookahead < 0) throw InvalidConfig("lookahead must be non-negative");
}

nlohmann::json ConditionerConfig::to_json() const {
  return {{"disc_dim", disc_dim},
          {"latent_dim", latent_dim},
          {"num_heads", num_heads},
          {"lookahead", lookahead}};
}

ConditionerConfig ConditionerConfig::from_json(const nlohmann::json& j) {
  ConditionerConfig c;
  c.disc_dim = j.value("disc_dim", c.disc_dim);
  c.latent_dim = j.value("latent_dim", c.latent_dim);
  c.num_heads = j.value("num_heads", c.num_heads);
  c.lookahead = j.value("lookahead", c.lookahead);
  return c;
}

torch::Tensor align_time(const torch::Tensor& latent, int64_t target_frames) {
  if (target_frames <= 0) throw InvalidInput("align_time: target frame count must be positive");
  if (latent.dim() < 2 || latent.size(-2) == 0) throw InvalidInput("align_time: empty latent");
  const int64_t source = latent.size(-2);
  if (source == target_frames) return latent;

  std::vector<int64_t> lo(target_frames), hi(target_frames);
  std::vector<double> frac(target_frames);
  for (int64_t j = 0; j < target_frames; ++j) {
    const double pos = target_frames == 1
                           ? 0.0
                           : static_cast<double>(j * (source - 1)) /
                                 static_cast<double>(target_frames - 1);
    lo[j] = std::min<int64_t>(static_cast<int64_t>(std::floor(pos)), source - 1);
    hi[j] = std::min<int64_t>(lo[j] + 1, source - 1);
    frac[j] = pos - static_cast<double>(lo[j]);
  }
  auto idx_opts = torch::TensorOptions().dtype(torch::kLong).device(latent.device());
  auto lo_t = torch::tensor(lo, idx_opts);
  auto hi_t = torch::tensor(hi, idx_opts);
  auto w = torch::tensor(frac, torch::TensorOptions().dtype(torch::kFloat64))
               .to(latent.scalar_type())
               .unsqueeze(-1);
  const int64_t time_dim = latent.dim() - 2;
  auto a = latent.index_select(time_dim, lo_t);
  auto b = latent.index_select(time_dim, hi_t);
  return a * (1 - w) + b * w;
}

LatentSequence align_time(const LatentSequence& latent, int64_t target_frames,
                          double target_hop_seconds) {
  return {align_time(latent.values, target_frames), target_hop_seconds};
}

torch::Tensor build_mask(int64_t frames, int64_t lookahead, torch::TensorOptions opts) {
  if (frames < 1) throw InvalidInput("build_mask: need at least one frame");
  if (lookahead < 0) throw InvalidInput("build_mask: lookahead must be non-negative");
  auto p = torch::arange(frames, torch::kLong).unsqueeze(1);
  auto q = torch::arange(frames, torch::kLong).unsqueeze(0);
  auto allowed = (q >= p) & (q <= p + lookahead);
  auto mask = torch::full({frames, frames}, -std::numeric_limits<double>::infinity(), opts);
  return mask.masked_fill(allowed, 0.0);
}

ConditionerImpl::ConditionerImpl(const ConditionerConfig& cfg) : cfg_(cfg) {
  cfg.validate();
  const int64_t dg = cfg.latent_dim;
  proj_weight = register_parameter("proj_weight", torch::empty({cfg.disc_dim, dg}));
  proj_bias = register_parameter("proj_bias", torch::zeros({dg}));
  w_q = register_parameter("w_q", torch::empty({dg, dg}));
  w_k = register_parameter("w_k", torch::empty({dg, dg}));
  w_v = register_parameter("w_v", torch::empty({dg, dg}));
  w_o = register_parameter("w_o", torch::empty({dg, dg}));
  for (auto* t : {&proj_weight, &w_q, &w_k, &w_v, &w_o}) torch::nn::init::xavier_uniform_(*t);
}

torch::Tensor ConditionerImpl::project(const torch::Tensor& disc) const {
  if (disc.size(-1) != cfg_.disc_dim) {
    throw InvalidInput("project: discriminative latent width " + std::to_string(disc.size(-1)) +
                       " != configured " + std::to_string(cfg_.disc_dim));
  }
  return torch::matmul(disc, proj_weight) + proj_bias;
}

AttentionResult ConditionerImpl::cross_attend(const torch::Tensor& gen,
                                              const torch::Tensor& disc_projected) const {
  if (gen.dim() != 3 || disc_projected.dim() != 3) {
    throw InvalidInput("cross_attend expects [B, T, d] latents");
  }
  if (gen.size(1) != disc_projected.size(1) || gen.size(0) != disc_projected.size(0)) {
    throw InvalidInput("cross_attend: query and key sequences differ in length (" +
                       std::to_string(gen.size(1)) + " vs " +
                       std::to_string(disc_projected.size(1)) + ")");
  }
  const int64_t dg = cfg_.latent_dim;
  if (gen.size(2) != dg || disc_projected.size(2) != dg) {
    throw InvalidInput("cross_attend: latent widths must equal " + std::to_string(dg));
  }
  const int64_t batch = gen.size(0), frames = gen.size(1), heads = cfg_.num_heads;
  const int64_t head_dim = dg / heads;

  auto split = [&](const torch::Tensor& x) {
    return x.view({batch, frames, heads, head_dim}).transpose(1, 2);
  };
  auto q = split(torch::matmul(gen, w_q));
  auto k = split(torch::matmul(disc_projected, w_k));
  auto v = split(torch::matmul(disc_projected, w_v));

  auto scores = torch::matmul(q, k.transpose(-2, -1)) / std::sqrt(static_cast<double>(head_dim));
  scores = scores + build_mask(frames, cfg_.lookahead, scores.options());
  auto weights = torch::softmax(scores, -1);
  auto merged = torch::matmul(weights, v).transpose(1, 2).reshape({batch, frames, dg});
  return {torch::matmul(merged, w_o), weights};
}

torch::Tensor ConditionerImpl::condition(const torch::Tensor& gen,
                                         const torch::Tensor& disc) const {
  if (gen.dim() != 3 || disc.dim() != 3) throw InvalidInput("condition expects [B, T, d] latents");
  auto aligned = align_time(disc, gen.size(1));
  auto attended = cross_attend(gen, project(aligned)).output;
  return torch::cat({gen, attended}, -1);
}

}  // namespace discogan
