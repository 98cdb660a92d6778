// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/discriminator.h"

#include <algorithm>

#include "discogan/errors.h"

namespace discogan {

void DiscriminatorConfig::validate() const {
  if (windows.empty()) throw InvalidConfig("discriminator needs at least one scale");
  for (int w : windows) {
    if (w < 8 || w % 4 != 0) throw InvalidConfig("discriminator windows must be multiples of 4");
  }
  if (input_channels <= 0 || max_channels < input_channels) {
    throw InvalidConfig("discriminator channels must satisfy 0 < input <= max");
  }
  if (dilations.empty()) throw InvalidConfig("discriminator needs dilated convs");
  for (auto d : dilations) {
    if (d <= 0) throw InvalidConfig("dilation rates must be positive");
  }
  if (dilated_freq_kernel <= 0) throw InvalidConfig("frequency kernel must be positive");
  if (leaky_slope < 0) throw InvalidConfig("LeakyReLU slope must be non-negative");
}

StftConfig DiscriminatorConfig::scale(std::size_t k) const {
  return StftConfig::resolution(windows.at(k));
}

int DiscriminatorConfig::max_window() const {
  return *std::max_element(windows.begin(), windows.end());
}

nlohmann::json DiscriminatorConfig::to_json() const {
  return {{"windows", windows},
          {"input_channels", input_channels},
          {"max_channels", max_channels},
          {"dilations", dilations},
          {"dilated_freq_kernel", dilated_freq_kernel},
          {"leaky_slope", leaky_slope}};
}

DiscriminatorConfig DiscriminatorConfig::from_json(const nlohmann::json& j) {
  DiscriminatorConfig c;
  c.windows = j.value("windows", c.windows);
  c.input_channels = j.value("input_channels", c.input_channels);
  c.max_channels = j.value("max_channels", c.max_channels);
  c.dilations = j.value("dilations", c.dilations);
  c.dilated_freq_kernel = j.value("dilated_freq_kernel", c.dilated_freq_kernel);
  c.leaky_slope = j.value("leaky_slope", c.leaky_slope);
  return c;
}

DiscriminatorConfig DiscriminatorConfig::paper() { return DiscriminatorConfig{}; }

DiscriminatorConfig DiscriminatorConfig::desk() {
  DiscriminatorConfig c;
  c.max_channels = 64;
  c.dilated_freq_kernel = 3;
  return c;
}

namespace {

// Layout [B, C, T, F]: h is time, w is frequency.
WnConv2dOptions same_tf(int64_t in, int64_t out, int64_t kt, int64_t kf, int64_t dil_t,
                        int64_t stride_f) {
  WnConv2dOptions o{in, out, {kt, kf}};
  o.dilation = {dil_t, 1};
  o.stride = {1, stride_f};
  const auto pt = same_padding(kt, dil_t);
  const auto pf = same_padding(kf);
  o.pad = {pf[0], pf[1], pt[0], pt[1]};
  return o;
}

}  // namespace

ScaleDiscriminatorImpl::ScaleDiscriminatorImpl(const DiscriminatorConfig& cfg,
                                               const StftConfig& stft)
    : stft_(stft), slope_(cfg.leaky_slope) {
  int64_t ch = cfg.input_channels;
  convs_->push_back(WnConv2d(same_tf(2, ch, 3, 8, 1, 1)));
  for (auto d : cfg.dilations) {
    const int64_t next = std::min(ch * 2, cfg.max_channels);
    convs_->push_back(WnConv2d(same_tf(ch, next, 3, cfg.dilated_freq_kernel, d, 2)));
    ch = next;
  }
  register_module("convs", convs_);
  out_conv_ = register_module("out_conv", WnConv2d(same_tf(ch, 1, 3, 3, 1, 1)));
}

std::pair<torch::Tensor, std::vector<torch::Tensor>> ScaleDiscriminatorImpl::forward(
    const torch::Tensor& wav) {
  auto spec = stft(wav, stft_);  // [B, F, T]
  auto h = torch::stack({torch::real(spec), torch::imag(spec)}, 1).transpose(2, 3);
  std::vector<torch::Tensor> features;
  for (auto& m : *convs_) {
    h = torch::leaky_relu(m->as<WnConv2dImpl>()->forward(h), slope_);
    features.push_back(h);
  }
  return {out_conv_(h), std::move(features)};
}

DiscriminatorBankImpl::DiscriminatorBankImpl(const DiscriminatorConfig& cfg) : cfg_(cfg) {
  cfg.validate();
  for (std::size_t k = 0; k < cfg.windows.size(); ++k) {
    subnets_->push_back(ScaleDiscriminator(cfg, cfg.scale(k)));
  }
  register_module("subnets", subnets_);
}

DiscriminatorOutput DiscriminatorBankImpl::forward(const torch::Tensor& wav) {
  if (wav.dim() != 2) throw InvalidInput("discriminator expects [B, N] waveforms");
  if (wav.size(1) < cfg_.max_window()) {
    throw InvalidInput("discriminator input has " + std::to_string(wav.size(1)) +
                       " samples; at least " + std::to_string(cfg_.max_window()) +
                       " are required");
  }
  DiscriminatorOutput out;
  for (auto& m : *subnets_) {
    auto [logits, feats] = m->as<ScaleDiscriminatorImpl>()->forward(wav);
    out.logits.push_back(logits);
    out.features.push_back(std::move(feats));
  }
  return out;
}

}  // namespace discogan
