// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/generator.h"

#include "discogan/errors.h"
#include "discogan/features.h"

namespace discogan {

std::string to_string(SkipMode mode) {
  switch (mode) {
    case SkipMode::kFilm:
      return "film";
    case SkipMode::kAdditive:
      return "additive";
    case SkipMode::kNone:
      return "none";
  }
  return "unknown";
}

SkipMode skip_mode_from_string(const std::string& name) {
  if (name == "film") return SkipMode::kFilm;
  if (name == "additive") return SkipMode::kAdditive;
  if (name == "none") return SkipMode::kNone;
  throw InvalidConfig("unknown skip mode '" + name + "'");
}

void GeneratorConfig::validate() const {
  if (base_channels <= 0 || max_channels < base_channels) {
    throw InvalidConfig("generator channels must satisfy 0 < base <= max");
  }
  if (num_blocks <= 0) throw InvalidConfig("generator needs at least one block");
  if (freq_stride < 2 || freq_stride % 2 != 0) {
    throw InvalidConfig("generator frequency stride must be even");
  }
  if (latent_dim <= 0 || lstm_layers <= 0 || lstm_units <= 0) {
    throw InvalidConfig("generator latent/LSTM sizes must be positive");
  }
  int64_t bins = input_bins;
  for (int64_t n = 0; n < num_blocks; ++n) {
    if (bins % freq_stride != 0) {
      throw InvalidConfig(std::to_string(input_bins) + " bins cannot be reduced by stride " +
                          std::to_string(freq_stride) + " over " + std::to_string(num_blocks) +
                          " blocks");
    }
    bins /= freq_stride;
  }
  if (bins != 1) {
    throw InvalidConfig("stride schedule leaves " + std::to_string(bins) +
                        " bins; the encoder must collapse frequency to 1");
  }
  if (input_bins != StftConfig::generator().num_bins()) {
    throw InvalidConfig("generator input_bins must match the generator STFT (" +
                        std::to_string(StftConfig::generator().num_bins()) + ")");
  }
  if (conditioning) {
    conditioning->validate();
    if (conditioning->latent_dim != latent_dim) {
      throw InvalidConfig("conditioning latent_dim must equal generator latent_dim");
    }
  }
}

std::vector<int64_t> GeneratorConfig::channel_schedule() const {
  std::vector<int64_t> ch{base_channels};
  for (int64_t n = 0; n < num_blocks; ++n) ch.push_back(std::min(ch.back() * 2, max_channels));
  return ch;
}

std::vector<int64_t> GeneratorConfig::bin_schedule() const {
  std::vector<int64_t> bins{input_bins};
  for (int64_t n = 0; n < num_blocks; ++n) bins.push_back(bins.back() / freq_stride);
  return bins;
}

nlohmann::json GeneratorConfig::to_json() const {
  nlohmann::json j{{"base_channels", base_channels},
                   {"max_channels", max_channels},
                   {"num_blocks", num_blocks},
                   {"freq_stride", freq_stride},
                   {"latent_dim", latent_dim},
                   {"lstm_layers", lstm_layers},
                   {"lstm_units", lstm_units},
                   {"input_kernel", {input_kernel.time, input_kernel.freq}},
                   {"residual_kernel", {residual_kernel.time, residual_kernel.freq}},
                   {"freq_dilation", freq_dilation},
                   {"input_bins", input_bins},
                   {"film_reduction", film_reduction},
                   {"latent_kernel", latent_kernel},
                   {"skip_mode", to_string(skip_mode)}};
  j["conditioning"] = conditioning ? conditioning->to_json() : nlohmann::json(nullptr);
  return j;
}

GeneratorConfig GeneratorConfig::from_json(const nlohmann::json& j) {
  GeneratorConfig c;
  c.base_channels = j.value("base_channels", c.base_channels);
  c.max_channels = j.value("max_channels", c.max_channels);
  c.num_blocks = j.value("num_blocks", c.num_blocks);
  c.freq_stride = j.value("freq_stride", c.freq_stride);
  c.latent_dim = j.value("latent_dim", c.latent_dim);
  c.lstm_layers = j.value("lstm_layers", c.lstm_layers);
  c.lstm_units = j.value("lstm_units", c.lstm_units);
  if (j.contains("input_kernel")) {
    c.input_kernel = {j["input_kernel"][0].get<int64_t>(), j["input_kernel"][1].get<int64_t>()};
  }
  if (j.contains("residual_kernel")) {
    c.residual_kernel = {j["residual_kernel"][0].get<int64_t>(),
                         j["residual_kernel"][1].get<int64_t>()};
  }
  c.freq_dilation = j.value("freq_dilation", c.freq_dilation);
  c.input_bins = j.value("input_bins", c.input_bins);
  c.film_reduction = j.value("film_reduction", c.film_reduction);
  c.latent_kernel = j.value("latent_kernel", c.latent_kernel);
  if (j.contains("skip_mode")) c.skip_mode = skip_mode_from_string(j["skip_mode"]);
  if (j.contains("conditioning") && !j["conditioning"].is_null()) {
    c.conditioning = ConditionerConfig::from_json(j["conditioning"]);
  }
  return c;
}

GeneratorConfig GeneratorConfig::paper() { return GeneratorConfig{}; }

GeneratorConfig GeneratorConfig::desk() {
  GeneratorConfig c;
  c.base_channels = 8;
  c.max_channels = 64;
  c.latent_dim = 32;
  c.lstm_units = 64;
  return c;
}

GeneratorConfig GeneratorConfig::with_conditioning(int64_t disc_dim) const {
  GeneratorConfig c = *this;
  ConditionerConfig cond;
  cond.disc_dim = disc_dim;
  cond.latent_dim = latent_dim;
  c.conditioning = cond;
  return c;
}

GeneratorConfig GeneratorConfig::without_conditioning() const {
  GeneratorConfig c = *this;
  c.conditioning.reset();
  return c;
}

namespace {

// Kernel (time, freq) mapped onto the [.., F, T] layout with centred padding.
WnConv2dOptions same_conv(int64_t in, int64_t out, KernelTF k, int64_t freq_dilation = 1) {
  WnConv2dOptions o{in, out, {k.freq, k.time}};
  o.dilation = {freq_dilation, 1};
  const auto pf = same_padding(k.freq, freq_dilation);
  const auto pt = same_padding(k.time);
  o.pad = {pt[0], pt[1], pf[0], pf[1]};
  return o;
}

}  // namespace

ResidualUnitImpl::ResidualUnitImpl(int64_t channels, KernelTF kernel, int64_t freq_dilation) {
  conv1_ = register_module("conv1", WnConv2d(same_conv(channels, channels, kernel)));
  conv2_ = register_module("conv2",
                           WnConv2d(same_conv(channels, channels, kernel, freq_dilation)));
}

torch::Tensor ResidualUnitImpl::forward(const torch::Tensor& x) {
  return x + conv2_(torch::elu(conv1_(torch::elu(x))));
}

torch::Tensor film_modulate(const torch::Tensor& decoder_feat, const FilmTerms& terms) {
  if (decoder_feat.sizes() != terms.gamma.sizes() || decoder_feat.sizes() != terms.beta.sizes()) {
    throw InvalidInput("film_modulate: decoder features and FiLM terms differ in shape");
  }
  if (terms.attention.dim() != decoder_feat.dim() || terms.attention.size(-3) != 1 ||
      terms.attention.size(-2) != decoder_feat.size(-2) ||
      terms.attention.size(-1) != decoder_feat.size(-1)) {
    throw InvalidInput("film_modulate: attention map must be [.., 1, F, T]");
  }
  auto gamma = terms.gamma * terms.attention;
  auto beta = terms.beta * terms.attention;
  return decoder_feat + (gamma * decoder_feat + beta);
}

FilmLayerImpl::FilmLayerImpl(int64_t channels, int64_t reduction) {
  const KernelTF k{1, 3};
  const int64_t reduced = std::max<int64_t>(1, channels / reduction);
  conv_gamma_ = register_module("conv_gamma", WnConv2d(same_conv(channels, channels, k)));
  conv_beta_ = register_module("conv_beta", WnConv2d(same_conv(channels, channels, k)));
  attn_reduce_ = register_module("attn_reduce", WnConv2d(same_conv(channels, reduced, k)));
  attn_expand_ = register_module("attn_expand", WnConv2d(same_conv(reduced, 1, {1, 1})));
}

FilmTerms FilmLayerImpl::terms(const torch::Tensor& encoder_feat) {
  FilmTerms t;
  t.gamma = torch::relu(conv_gamma_(encoder_feat));
  t.beta = torch::sigmoid(conv_beta_(encoder_feat));
  t.attention = torch::sigmoid(attn_expand_(torch::relu(attn_reduce_(encoder_feat))));
  return t;
}

torch::Tensor FilmLayerImpl::forward(const torch::Tensor& decoder_feat,
                                     const torch::Tensor& encoder_feat) {
  if (decoder_feat.sizes() != encoder_feat.sizes()) {
    throw InvalidInput("FiLM: decoder and encoder features differ in shape");
  }
  return film_modulate(decoder_feat, terms(encoder_feat));
}

GeneratorImpl::GeneratorImpl(const GeneratorConfig& cfg) : cfg_(cfg) {
  cfg.validate();
  const auto ch = cfg.channel_schedule();
  const int64_t stride = cfg.freq_stride;

  input_conv_ = register_module("input_conv", WnConv2d(same_conv(3, ch[0], cfg.input_kernel)));
  for (int64_t n = 0; n < cfg.num_blocks; ++n) {
    enc_res_->push_back(ResidualUnit(ch[n], cfg.residual_kernel, cfg.freq_dilation));
    // kernel 2*stride along frequency, padding stride/2 on each side: F -> F/stride
    WnConv2dOptions down{ch[n], ch[n + 1], {2 * stride, 1}};
    down.stride = {stride, 1};
    down.pad = {0, 0, stride / 2, stride / 2};
    enc_down_->push_back(WnConv2d(down));

    WnConvTranspose2dOptions up{ch[n + 1], ch[n], {2 * stride, 1}};
    up.stride = {stride, 1};
    up.padding = {stride / 2, 0};
    dec_up_->push_back(WnConvTranspose2d(up));
    dec_res_->push_back(ResidualUnit(ch[n], cfg.residual_kernel, cfg.freq_dilation));
    film_->push_back(FilmLayer(ch[n], cfg.film_reduction));
  }
  register_module("enc_res", enc_res_);
  register_module("enc_down", enc_down_);
  register_module("dec_up", dec_up_);
  register_module("dec_res", dec_res_);
  register_module("film", film_);

  lstm_ = register_module(
      "lstm", torch::nn::LSTM(torch::nn::LSTMOptions(ch.back(), cfg.lstm_units)
                                  .num_layers(cfg.lstm_layers)
                                  .batch_first(true)));
  init_lstm(lstm_);
  latent_out_ = register_module("latent_out",
                                WnConv1d(cfg.lstm_units, cfg.latent_dim, cfg.latent_kernel));
  latent_in_ = register_module(
      "latent_in", WnConv1d(cfg.decoder_input_width(), ch.back(), cfg.latent_kernel));
  output_conv_ = register_module("output_conv", WnConv2d(same_conv(ch[0], 3, cfg.input_kernel)));
  if (cfg.conditioning) conditioner_ = register_module("conditioner", Conditioner(*cfg.conditioning));
}

EncoderState GeneratorImpl::encode(const torch::Tensor& features) {
  if (features.dim() != 4 || features.size(1) != 3 || features.size(2) != cfg_.input_bins) {
    throw InvalidInput("encode expects [B, 3, " + std::to_string(cfg_.input_bins) +
                       ", T] features");
  }
  EncoderState state;
  auto h = input_conv_(features);
  for (int64_t n = 0; n < cfg_.num_blocks; ++n) {
    h = enc_res_[n]->as<ResidualUnitImpl>()->forward(h);
    state.skips.push_back(h);
    h = enc_down_[n]->as<WnConv2dImpl>()->forward(torch::elu(h));
  }
  state.bottleneck = h;
  auto seq = h.squeeze(2).transpose(1, 2);  // [B, T, C]
  auto out = std::get<0>(lstm_->forward(seq));
  state.latent = latent_out_(out.transpose(1, 2)).transpose(1, 2);
  return state;
}

torch::Tensor GeneratorImpl::decode(const EncoderState& state, const torch::Tensor& latent) {
  if (latent.dim() != 3) throw InvalidInput("decode expects a [B, T, d] latent");
  const int64_t width = latent.size(2);
  if (width != cfg_.latent_dim && width != 2 * cfg_.latent_dim) {
    throw InvalidInput("decode: latent width " + std::to_string(width) + " is neither d_g (" +
                       std::to_string(cfg_.latent_dim) + ") nor 2 d_g");
  }
  if (width != cfg_.decoder_input_width()) {
    throw InvalidInput("decode: this generator expects latent width " +
                       std::to_string(cfg_.decoder_input_width()) + ", got " +
                       std::to_string(width));
  }
  if (static_cast<int64_t>(state.skips.size()) != cfg_.num_blocks) {
    throw InvalidInput("decode: encoder state has the wrong number of skip tensors");
  }
  auto d = latent_in_(latent.transpose(1, 2)).unsqueeze(2);  // [B, C, 1, T]
  for (int64_t n = cfg_.num_blocks - 1; n >= 0; --n) {
    d = dec_up_[n]->as<WnConvTranspose2dImpl>()->forward(torch::elu(d));
    d = dec_res_[n]->as<ResidualUnitImpl>()->forward(d);
    const auto& skip = state.skips[n];
    switch (cfg_.skip_mode) {
      case SkipMode::kFilm:
        d = film_[n]->as<FilmLayerImpl>()->forward(d, skip);
        break;
      case SkipMode::kAdditive:
        d = d + skip;
        break;
      case SkipMode::kNone:
        break;
    }
  }
  return output_conv_(torch::elu(d));
}

torch::Tensor GeneratorImpl::condition(const torch::Tensor& gen_latent,
                                       const torch::Tensor& disc_latent) {
  if (!conditioner_) throw InvalidInput("this generator has no conditioner");
  return conditioner_->condition(gen_latent, disc_latent);
}

torch::Tensor GeneratorImpl::forward(const torch::Tensor& wav, const torch::Tensor& disc_latent) {
  if (wav.dim() != 2) throw InvalidInput("generator expects [B, N] waveforms");
  const auto stft_cfg = cfg_.stft();
  auto features = pack_features(stft(wav, stft_cfg));
  auto state = encode(features);
  torch::Tensor latent = state.latent;
  if (conditioned()) {
    if (!disc_latent.defined()) {
      throw InvalidInput("conditioned generator requires a discriminative latent");
    }
    latent = condition(latent, disc_latent);
  } else if (disc_latent.defined()) {
    throw InvalidInput("unconditioned generator was given a discriminative latent");
  }
  auto head = decode(state, latent);
  return reconstruct(head, stft_cfg, wav.size(1));
}

}  // namespace discogan
