// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/disc_models.h"

#include "discogan/errors.h"
#include "discogan/layers.h"

namespace discogan {

std::string to_string(DiscModelKind kind) {
  switch (kind) {
    case DiscModelKind::kGcrn:
      return "gcrn";
    case DiscModelKind::kDccrn:
      return "dccrn";
    case DiscModelKind::kDdaec:
      return "ddaec";
    case DiscModelKind::kTaylorSeNet:
      return "taylorsenet";
  }
  return "unknown";
}

DiscModelKind disc_model_kind_from_string(const std::string& name) {
  if (name == "gcrn") return DiscModelKind::kGcrn;
  if (name == "dccrn") return DiscModelKind::kDccrn;
  if (name == "ddaec") return DiscModelKind::kDdaec;
  if (name == "taylorsenet") return DiscModelKind::kTaylorSeNet;
  throw InvalidConfig("unknown discriminative model '" + name + "'");
}

StftConfig DiscModelSpec::stft() const {
  StftConfig cfg;
  cfg.fft_length = fft;
  cfg.window_length = window;
  cfg.hop_length = hop;
  // DCCRN keeps fft / 2 bins so that its stride-2 encoder halves evenly.
  cfg.drop_nyquist = kind == DiscModelKind::kDccrn;
  return cfg;
}

DiscModelSpec DiscModelSpec::gcrn() { return {DiscModelKind::kGcrn, 320, 160, 320, 1024}; }

DiscModelSpec DiscModelSpec::dccrn() { return {DiscModelKind::kDccrn, 400, 100, 512, 1024}; }

namespace {

constexpr int64_t kGcrnKernel = 3;
constexpr int64_t kGcrnStride = 2;
constexpr int64_t kDccrnKernelT = 2;
constexpr int64_t kDccrnKernelF = 5;
constexpr int64_t kDccrnPadF = 2;

void reject_reserved(DiscModelKind kind) {
  if (kind == DiscModelKind::kDdaec || kind == DiscModelKind::kTaylorSeNet) {
    throw InvalidConfig("discriminative model '" + to_string(kind) +
                        "' is a reserved extension point and is not implemented");
  }
}

int64_t dccrn_bins_after(int64_t bins, std::size_t layers) {
  for (std::size_t n = 0; n < layers; ++n) bins = (bins + 2 * kDccrnPadF - kDccrnKernelF) / 2 + 1;
  return bins;
}

}  // namespace

void DiscModelConfig::validate() const {
  reject_reserved(kind);
  if (channels.empty()) throw InvalidConfig("discriminative model needs encoder channels");
  for (auto c : channels) {
    if (c <= 0) throw InvalidConfig("encoder channels must be positive");
  }
  if (lstm_layers <= 0 || latent_dim <= 0) {
    throw InvalidConfig("LSTM layers and latent width must be positive");
  }
  if (kind == DiscModelKind::kGcrn) {
    const auto bins = GcrnImpl::bin_schedule(spec().stft().num_bins(),
                                             static_cast<int64_t>(channels.size()));
    if (bins.back() < 1) throw InvalidConfig("GCRN encoder collapses frequency below one bin");
    if (channels.back() * bins.back() != latent_dim) {
      throw InvalidConfig("GCRN latent_dim must equal last channels x bins (" +
                          std::to_string(channels.back() * bins.back()) + ")");
    }
  } else {
    if (lstm_hidden <= 0) throw InvalidConfig("DCCRN lstm_hidden must be positive");
    if (dccrn_bins_after(spec().stft().num_bins(), channels.size()) < 1) {
      throw InvalidConfig("DCCRN encoder collapses frequency below one bin");
    }
  }
}

DiscModelSpec DiscModelConfig::spec() const {
  reject_reserved(kind);
  DiscModelSpec s = kind == DiscModelKind::kGcrn ? DiscModelSpec::gcrn() : DiscModelSpec::dccrn();
  s.latent_dim = latent_dim;
  return s;
}

nlohmann::json DiscModelConfig::to_json() const {
  return {{"kind", to_string(kind)},     {"channels", channels},
          {"lstm_layers", lstm_layers},  {"lstm_hidden", lstm_hidden},
          {"latent_dim", latent_dim},    {"with_decoder", with_decoder}};
}

DiscModelConfig DiscModelConfig::from_json(const nlohmann::json& j) {
  DiscModelConfig c;
  if (j.contains("kind")) c.kind = disc_model_kind_from_string(j["kind"]);
  c.channels = j.value("channels", c.channels);
  c.lstm_layers = j.value("lstm_layers", c.lstm_layers);
  c.lstm_hidden = j.value("lstm_hidden", c.lstm_hidden);
  c.latent_dim = j.value("latent_dim", c.latent_dim);
  c.with_decoder = j.value("with_decoder", c.with_decoder);
  return c;
}

DiscModelConfig DiscModelConfig::paper(DiscModelKind kind) {
  reject_reserved(kind);
  DiscModelConfig c;
  c.kind = kind;
  c.channels = {16, 32, 64, 128, 256};
  c.latent_dim = 1024;
  c.lstm_hidden = 128;
  return c;
}

DiscModelConfig DiscModelConfig::desk(DiscModelKind kind) {
  reject_reserved(kind);
  DiscModelConfig c;
  c.kind = kind;
  if (kind == DiscModelKind::kGcrn) {
    c.channels = {8, 16, 32, 64, 128};
    c.latent_dim = 512;
  } else {
    c.channels = {8, 16, 32, 64, 64};
    c.latent_dim = 1024;
    c.lstm_hidden = 64;
  }
  return c;
}

torch::Tensor glu(const torch::Tensor& x, const torch::Tensor& w1, const torch::Tensor& b1,
                  const torch::Tensor& w2, const torch::Tensor& b2) {
  if (x.size(-1) != w1.size(0) || w1.sizes() != w2.sizes() || b1.size(-1) != w1.size(1) ||
      b2.size(-1) != w2.size(1)) {
    throw InvalidInput("glu: operand shapes are not conformable");
  }
  return torch::tanh(torch::matmul(x, w1) + b1) * torch::sigmoid(torch::matmul(x, w2) + b2);
}

ComplexTensor::ComplexTensor(torch::Tensor r, torch::Tensor i)
    : real(std::move(r)), imag(std::move(i)) {
  if (real.sizes() != imag.sizes()) {
    throw InvalidInput("complex tensor parts differ in shape");
  }
}

ComplexTensor ComplexTensor::from_complex(const torch::Tensor& z) {
  return {torch::real(z).contiguous(), torch::imag(z).contiguous()};
}

ComplexTensor complex_conv(const ComplexTensor& x, const ComplexTensor& w,
                           const ConvGeometry& geom) {
  if (x.real.dim() != 4 || w.real.dim() != 4 || x.real.size(1) != w.real.size(1)) {
    throw InvalidInput("complex_conv: expected [B, C, H, W] input and [O, C, kh, kw] kernel");
  }
  auto conv = [&](const torch::Tensor& a, const torch::Tensor& k) {
    return torch::conv2d(a, k, {}, geom.stride, geom.padding);
  };
  return {conv(x.real, w.real) - conv(x.imag, w.imag),
          conv(x.real, w.imag) + conv(x.imag, w.real)};
}

namespace {

torch::Tensor init_complex_kernel(std::vector<int64_t> shape) {
  auto w = torch::empty(shape);
  torch::nn::init::kaiming_uniform_(w, std::sqrt(5.0));
  return w;
}

}  // namespace

ComplexConv2dImpl::ComplexConv2dImpl(int64_t in, int64_t out, int64_t kernel_t,
                                     int64_t kernel_f, int64_t stride_f, int64_t pad_f)
    : kernel_t_(kernel_t), stride_f_(stride_f), pad_f_(pad_f) {
  w_r = register_parameter("w_r", init_complex_kernel({out, in, kernel_t, kernel_f}));
  w_i = register_parameter("w_i", init_complex_kernel({out, in, kernel_t, kernel_f}));
  b_r = register_parameter("b_r", torch::zeros({out}));
  b_i = register_parameter("b_i", torch::zeros({out}));
}

ComplexTensor ComplexConv2dImpl::forward(const ComplexTensor& x) {
  // Causal in time: pad kernel_t - 1 frames on the left only.
  auto pad = [&](const torch::Tensor& t) {
    return torch::constant_pad_nd(t, {pad_f_, pad_f_, kernel_t_ - 1, 0});
  };
  ConvGeometry geom;
  geom.stride = {1, stride_f_};
  auto y = complex_conv({pad(x.real), pad(x.imag)}, {w_r, w_i}, geom);
  return {y.real + b_r.view({1, -1, 1, 1}), y.imag + b_i.view({1, -1, 1, 1})};
}

ComplexConvTranspose2dImpl::ComplexConvTranspose2dImpl(int64_t in, int64_t out,
                                                       int64_t kernel_t, int64_t kernel_f,
                                                       int64_t stride_f, int64_t pad_f,
                                                       int64_t output_pad_f)
    : kernel_t_(kernel_t), stride_f_(stride_f), pad_f_(pad_f), output_pad_f_(output_pad_f) {
  w_r = register_parameter("w_r", init_complex_kernel({in, out, kernel_t, kernel_f}));
  w_i = register_parameter("w_i", init_complex_kernel({in, out, kernel_t, kernel_f}));
  b_r = register_parameter("b_r", torch::zeros({out}));
  b_i = register_parameter("b_i", torch::zeros({out}));
}

ComplexTensor ComplexConvTranspose2dImpl::forward(const ComplexTensor& x) {
  const std::array<int64_t, 2> stride{1, stride_f_};
  const std::array<int64_t, 2> padding{0, pad_f_};
  const std::array<int64_t, 2> output_padding{0, output_pad_f_};
  auto deconv = [&](const torch::Tensor& a, const torch::Tensor& k) {
    return torch::conv_transpose2d(a, k, {}, stride, padding, output_padding);
  };
  const int64_t frames = x.real.size(2);
  auto re = deconv(x.real, w_r) - deconv(x.imag, w_i);
  auto im = deconv(x.real, w_i) + deconv(x.imag, w_r);
  // Keep the first T frames: output frame t then depends on inputs <= t.
  re = re.narrow(2, 0, frames) + b_r.view({1, -1, 1, 1});
  im = im.narrow(2, 0, frames) + b_i.view({1, -1, 1, 1});
  return {re, im};
}

namespace {

torch::nn::Conv2d gcrn_conv(int64_t in, int64_t out) {
  auto conv = torch::nn::Conv2d(
      torch::nn::Conv2dOptions(in, out, {1, kGcrnKernel}).stride({1, kGcrnStride}));
  torch::nn::init::zeros_(conv->bias);
  return conv;
}

torch::nn::ConvTranspose2d gcrn_deconv(int64_t in, int64_t out, int64_t output_pad) {
  auto conv = torch::nn::ConvTranspose2d(torch::nn::ConvTranspose2dOptions(in, out, {1, kGcrnKernel})
                                             .stride({1, kGcrnStride})
                                             .output_padding({0, output_pad}));
  torch::nn::init::zeros_(conv->bias);
  return conv;
}

torch::Tensor gated(torch::nn::Module& a, torch::nn::Module& b, const torch::Tensor& x) {
  if (auto* conv = a.as<torch::nn::Conv2dImpl>()) {
    return torch::tanh(conv->forward(x)) * torch::sigmoid(b.as<torch::nn::Conv2dImpl>()->forward(x));
  }
  return torch::tanh(a.as<torch::nn::ConvTranspose2dImpl>()->forward(x)) *
         torch::sigmoid(b.as<torch::nn::ConvTranspose2dImpl>()->forward(x));
}

void check_wav(const torch::Tensor& wav) {
  if (wav.dim() != 2 || wav.size(1) == 0) throw InvalidInput("expected [B, N] waveforms");
}

}  // namespace

std::vector<int64_t> GcrnImpl::bin_schedule(int64_t bins, int64_t blocks) {
  std::vector<int64_t> out{bins};
  for (int64_t n = 0; n < blocks; ++n) out.push_back((out.back() - kGcrnKernel) / kGcrnStride + 1);
  return out;
}

GcrnImpl::GcrnImpl(const DiscModelConfig& cfg) : DiscModelImpl(cfg) {
  cfg.validate();
  if (cfg.kind != DiscModelKind::kGcrn) throw InvalidConfig("GcrnImpl needs a gcrn config");
  const auto& ch = cfg.channels;
  const auto blocks = static_cast<int64_t>(ch.size());
  bins_ = bin_schedule(spec().stft().num_bins(), blocks);

  int64_t in = 2;
  for (int64_t n = 0; n < blocks; ++n) {
    enc_a_->push_back(gcrn_conv(in, ch[n]));
    enc_b_->push_back(gcrn_conv(in, ch[n]));
    in = ch[n];
  }
  register_module("enc_a", enc_a_);
  register_module("enc_b", enc_b_);

  lstm_ = register_module(
      "lstm", torch::nn::LSTM(torch::nn::LSTMOptions(cfg.latent_dim, cfg.latent_dim)
                                  .num_layers(cfg.lstm_layers)
                                  .batch_first(true)));
  init_lstm(lstm_);

  // Decoder level n maps [d_n, E_n] (2 C_n channels) to C_{n-1} channels.
  for (int64_t n = blocks - 1; n >= 1; --n) {
    const int64_t target = bins_[n];
    const int64_t natural = (bins_[n + 1] - 1) * kGcrnStride + kGcrnKernel;
    const int64_t op = target - natural;
    for (auto* list : {&dec_real_a_, &dec_real_b_, &dec_imag_a_, &dec_imag_b_}) {
      (*list)->push_back(gcrn_deconv(2 * ch[n], ch[n - 1], op));
    }
  }
  register_module("dec_real_a", dec_real_a_);
  register_module("dec_real_b", dec_real_b_);
  register_module("dec_imag_a", dec_imag_a_);
  register_module("dec_imag_b", dec_imag_b_);
  const int64_t op0 = bins_[0] - ((bins_[1] - 1) * kGcrnStride + kGcrnKernel);
  out_real_ = register_module("out_real", gcrn_deconv(2 * ch[0], 1, op0));
  out_imag_ = register_module("out_imag", gcrn_deconv(2 * ch[0], 1, op0));
}

GcrnImpl::Encoded GcrnImpl::encode_spectrum(const torch::Tensor& spec_ri) {
  if (spec_ri.dim() != 4 || spec_ri.size(1) != 2 || spec_ri.size(3) != bins_[0]) {
    throw InvalidInput("GCRN expects a [B, 2, T, " + std::to_string(bins_[0]) + "] spectrum");
  }
  Encoded enc;
  auto h = spec_ri;
  for (std::size_t n = 0; n < enc_a_->size(); ++n) {
    h = gated(*enc_a_[n], *enc_b_[n], h);
    enc.skips.push_back(h);
  }
  const int64_t batch = h.size(0), frames = h.size(2);
  auto seq = h.permute({0, 2, 1, 3}).reshape({batch, frames, -1});  // [B, T, C F]
  enc.latent = std::get<0>(lstm_->forward(seq));
  return enc;
}

torch::Tensor GcrnImpl::decode_spectrum(const Encoded& enc) {
  const auto& ch = cfg_.channels;
  const auto blocks = static_cast<int64_t>(ch.size());
  const int64_t batch = enc.latent.size(0), frames = enc.latent.size(1);
  auto d0 = enc.latent.reshape({batch, frames, ch.back(), bins_.back()}).permute({0, 2, 1, 3});
  auto run = [&](torch::nn::ModuleList& a, torch::nn::ModuleList& b,
                 torch::nn::ConvTranspose2d& out) {
    auto d = d0;
    for (int64_t k = 0; k < blocks - 1; ++k) {
      const int64_t n = blocks - 1 - k;
      d = gated(*a[k], *b[k], torch::cat({d, enc.skips[n]}, 1));
    }
    return out->forward(torch::cat({d, enc.skips[0]}, 1));
  };
  auto re = run(dec_real_a_, dec_real_b_, out_real_);
  auto im = run(dec_imag_a_, dec_imag_b_, out_imag_);
  return torch::cat({re, im}, 1);
}

namespace {

torch::Tensor to_ri(const torch::Tensor& spec) {
  // complex [B, F, T] -> [B, 2, T, F]
  return torch::stack({torch::real(spec), torch::imag(spec)}, 1).transpose(2, 3);
}

torch::Tensor from_ri(const torch::Tensor& ri) {
  auto t = ri.transpose(2, 3);  // [B, 2, F, T]
  return torch::complex(t.select(1, 0).contiguous(), t.select(1, 1).contiguous());
}

}  // namespace

torch::Tensor GcrnImpl::encode(const torch::Tensor& wav) {
  check_wav(wav);
  return encode_spectrum(to_ri(stft(wav, spec().stft()))).latent;
}

torch::Tensor GcrnImpl::enhance(const torch::Tensor& wav) {
  check_wav(wav);
  const auto cfg = spec().stft();
  auto est = decode_spectrum(encode_spectrum(to_ri(stft(wav, cfg))));
  return istft(from_ri(est), cfg, wav.size(1));
}

DccrnImpl::DccrnImpl(const DiscModelConfig& cfg) : DiscModelImpl(cfg) {
  cfg.validate();
  if (cfg.kind != DiscModelKind::kDccrn) throw InvalidConfig("DccrnImpl needs a dccrn config");
  const auto& ch = cfg.channels;
  int64_t in = 1;
  for (auto c : ch) {
    encoder_->push_back(ComplexConv2d(in, c, kDccrnKernelT, kDccrnKernelF, 2, kDccrnPadF));
    in = c;
  }
  register_module("encoder", encoder_);
  enc_bins_ = dccrn_bins_after(spec().stft().num_bins(), ch.size());

  const int64_t flat = ch.back() * enc_bins_;
  auto lstm_opts = torch::nn::LSTMOptions(flat, cfg.lstm_hidden)
                       .num_layers(cfg.lstm_layers)
                       .batch_first(true);
  lstm_r_ = register_module("lstm_r", torch::nn::LSTM(lstm_opts));
  lstm_i_ = register_module("lstm_i", torch::nn::LSTM(lstm_opts));
  init_lstm(lstm_r_);
  init_lstm(lstm_i_);
  proj_ = register_module("proj", torch::nn::Linear(2 * cfg.lstm_hidden, cfg.latent_dim));
  torch::nn::init::zeros_(proj_->bias);

  if (cfg.with_decoder) {
    unproj_ = register_module("unproj", torch::nn::Linear(cfg.latent_dim, 2 * flat));
    torch::nn::init::zeros_(unproj_->bias);
    for (int64_t n = static_cast<int64_t>(ch.size()) - 1; n >= 0; --n) {
      const int64_t out = n == 0 ? 1 : ch[n - 1];
      decoder_->push_back(
          ComplexConvTranspose2d(2 * ch[n], out, kDccrnKernelT, kDccrnKernelF, 2, kDccrnPadF, 1));
    }
    register_module("decoder", decoder_);
  }
}

std::vector<ComplexTensor> DccrnImpl::encode_layers(const torch::Tensor& spec) {
  // complex [B, F, T] -> one-channel [B, 1, T, F]
  auto x = ComplexTensor::from_complex(spec.transpose(1, 2).unsqueeze(1));
  std::vector<ComplexTensor> layers;
  for (std::size_t n = 0; n < encoder_->size(); ++n) {
    auto y = encoder_[n]->as<ComplexConv2dImpl>()->forward(x);
    x = {torch::elu(y.real), torch::elu(y.imag)};
    layers.push_back(x);
  }
  return layers;
}

ComplexLstmOutput DccrnImpl::complex_lstm(const ComplexTensor& h) {
  const int64_t batch = h.real.size(0), frames = h.real.size(2);
  auto flat = [&](const torch::Tensor& t) {
    return t.permute({0, 2, 1, 3}).reshape({batch, frames, -1});
  };
  auto hr = flat(h.real), hi = flat(h.imag);
  auto rr = std::get<0>(lstm_r_->forward(hr));
  auto ii = std::get<0>(lstm_i_->forward(hi));
  auto ri = std::get<0>(lstm_r_->forward(hi));
  auto ir = std::get<0>(lstm_i_->forward(hr));
  return {rr - ii, ri + ir};
}

torch::Tensor DccrnImpl::bottleneck(const ComplexTensor& h) {
  const int64_t expected = cfg_.channels.back();
  if (h.real.dim() != 4 || h.real.size(1) != expected || h.real.size(3) != enc_bins_) {
    throw InvalidInput("DCCRN bottleneck expects [B, " + std::to_string(expected) + ", T, " +
                       std::to_string(enc_bins_) + "]");
  }
  auto out = complex_lstm(h);
  return proj_->forward(torch::cat({out.real, out.imag}, -1));
}

torch::Tensor DccrnImpl::encode(const torch::Tensor& wav) {
  check_wav(wav);
  return bottleneck(encode_layers(stft(wav, spec().stft())).back());
}

torch::Tensor DccrnImpl::enhance(const torch::Tensor& wav) {
  check_wav(wav);
  if (!cfg_.with_decoder) throw InvalidConfig("this DCCRN was built without a decoder");
  const auto cfg = spec().stft();
  auto spec_x = stft(wav, cfg);  // [B, F, T]
  auto layers = encode_layers(spec_x);
  auto latent = bottleneck(layers.back());
  const int64_t batch = latent.size(0), frames = latent.size(1);
  const int64_t c_last = cfg_.channels.back();
  auto flat = unproj_->forward(latent).reshape({batch, frames, 2, c_last, enc_bins_});
  ComplexTensor d{flat.select(2, 0).permute({0, 2, 1, 3}).contiguous(),
                  flat.select(2, 1).permute({0, 2, 1, 3}).contiguous()};
  const auto levels = static_cast<int64_t>(layers.size());
  for (int64_t k = 0; k < levels; ++k) {
    const auto& skip = layers[levels - 1 - k];
    ComplexTensor in{torch::cat({d.real, skip.real}, 1), torch::cat({d.imag, skip.imag}, 1)};
    d = decoder_[k]->as<ComplexConvTranspose2dImpl>()->forward(in);
    if (k + 1 < levels) d = {torch::elu(d.real), torch::elu(d.imag)};
  }
  // Complex ratio mask tanh(|M|) e^{j angle(M)} applied to X.
  auto mask = torch::complex(d.real.squeeze(1), d.imag.squeeze(1)).transpose(1, 2);  // [B, F, T]
  auto mag = torch::abs(mask);
  auto unit = mask / (mag + 1e-8);
  return istft(spec_x * unit * torch::tanh(mag), cfg, wav.size(1));
}

DiscModelPtr make_disc_model(const DiscModelConfig& cfg) {
  cfg.validate();
  switch (cfg.kind) {
    case DiscModelKind::kGcrn:
      return std::make_shared<GcrnImpl>(cfg);
    case DiscModelKind::kDccrn:
      return std::make_shared<DccrnImpl>(cfg);
    default:
      break;
  }
  reject_reserved(cfg.kind);
  throw InvalidConfig("unsupported discriminative model");
}

torch::Tensor disc_training_loss(const torch::Tensor& estimate, const torch::Tensor& clean,
                                 const StftConfig& cfg) {
  if (estimate.sizes() != clean.sizes() || estimate.dim() != 2) {
    throw InvalidInput("disc_training_loss expects equal [B, N] waveforms");
  }
  auto dot = (estimate * clean).sum(-1);
  auto energy = estimate.pow(2).sum(-1) * clean.pow(2).sum(-1);
  auto cos2 = dot.pow(2) / (energy + 1e-12);
  auto scale_invariant = -10.0 * torch::log10(cos2 + 1e-8);
  auto mag_l1 = (torch::abs(stft(estimate, cfg)) - torch::abs(stft(clean, cfg))).abs().mean();
  return scale_invariant.mean() + mag_l1;
}

}  // namespace discogan
