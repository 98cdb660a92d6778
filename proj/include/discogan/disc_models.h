// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <torch/torch.h>

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "discogan/stft.h"

namespace discogan {

// DDAEC and TaylorSENet are reserved extension points without an implementation.
enum class DiscModelKind { kGcrn, kDccrn, kDdaec, kTaylorSeNet };

std::string to_string(DiscModelKind kind);
DiscModelKind disc_model_kind_from_string(const std::string& name);

// Analysis front-end and latent width of a discriminative model.
struct DiscModelSpec {
  DiscModelKind kind = DiscModelKind::kGcrn;
  int window = 320;
  int hop = 160;
  int fft = 320;
  int64_t latent_dim = 1024;

  StftConfig stft() const;
  static DiscModelSpec gcrn();
  static DiscModelSpec dccrn();
};

struct DiscModelConfig {
  DiscModelKind kind = DiscModelKind::kGcrn;
  std::vector<int64_t> channels{16, 32, 64, 128, 256};
  int64_t lstm_layers = 2;
  // DCCRN only: hidden units of each of the two real LSTMs.
  int64_t lstm_hidden = 128;
  int64_t latent_dim = 1024;
  // DCCRN only: build the mask decoder so the model can enhance.
  bool with_decoder = true;

  void validate() const;
  DiscModelSpec spec() const;

  nlohmann::json to_json() const;
  static DiscModelConfig from_json(const nlohmann::json& j);
  bool operator==(const DiscModelConfig&) const = default;

  static DiscModelConfig paper(DiscModelKind kind);
  static DiscModelConfig desk(DiscModelKind kind);
};

// Y = tanh(X W1 + b1) * sigmoid(X W2 + b2); X is [.., in], W is [in, out].
torch::Tensor glu(const torch::Tensor& x, const torch::Tensor& w1, const torch::Tensor& b1,
                  const torch::Tensor& w2, const torch::Tensor& b2);

struct ComplexTensor {
  torch::Tensor real;
  torch::Tensor imag;

  ComplexTensor() = default;
  ComplexTensor(torch::Tensor r, torch::Tensor i);
  static ComplexTensor from_complex(const torch::Tensor& z);
  torch::Tensor to_complex() const { return torch::complex(real, imag); }
};

struct ConvGeometry {
  std::array<int64_t, 2> stride{1, 1};
  std::array<int64_t, 2> padding{0, 0};
};

// Y = (X_r * W_r - X_i * W_i) + j (X_r * W_i + X_i * W_r), '*' a 2D convolution.
ComplexTensor complex_conv(const ComplexTensor& x, const ComplexTensor& w,
                           const ConvGeometry& geom = {});

// Complex 2D conv over [B, C, T, F] with causal time padding.
class ComplexConv2dImpl : public torch::nn::Module {
 public:
  ComplexConv2dImpl(int64_t in, int64_t out, int64_t kernel_t, int64_t kernel_f,
                    int64_t stride_f, int64_t pad_f);
  ComplexTensor forward(const ComplexTensor& x);

  torch::Tensor w_r, w_i, b_r, b_i;

 private:
  int64_t kernel_t_, stride_f_, pad_f_;
};
TORCH_MODULE(ComplexConv2d);

// Transposed counterpart; drops trailing frames so that T is preserved.
class ComplexConvTranspose2dImpl : public torch::nn::Module {
 public:
  ComplexConvTranspose2dImpl(int64_t in, int64_t out, int64_t kernel_t, int64_t kernel_f,
                             int64_t stride_f, int64_t pad_f, int64_t output_pad_f);
  ComplexTensor forward(const ComplexTensor& x);

  torch::Tensor w_r, w_i, b_r, b_i;

 private:
  int64_t kernel_t_, stride_f_, pad_f_, output_pad_f_;
};
TORCH_MODULE(ComplexConvTranspose2d);

// Common interface of the discriminative enhancers. Waveforms are [B, N].
class DiscModelImpl : public torch::nn::Module {
 public:
  explicit DiscModelImpl(DiscModelConfig cfg) : cfg_(std::move(cfg)) {}
  // D_L: [B, T_d, d_d] with T_d = 1 + N / hop.
  virtual torch::Tensor encode(const torch::Tensor& wav) = 0;
  virtual torch::Tensor enhance(const torch::Tensor& wav) = 0;

  const DiscModelConfig& config() const { return cfg_; }
  DiscModelSpec spec() const { return cfg_.spec(); }

 protected:
  DiscModelConfig cfg_;
};

// Two-branch gated conv/LSTM network mapping the noisy (real, imag) spectrum
// to the clean one.
class GcrnImpl : public DiscModelImpl {
 public:
  explicit GcrnImpl(const DiscModelConfig& cfg);
  torch::Tensor encode(const torch::Tensor& wav) override;
  torch::Tensor enhance(const torch::Tensor& wav) override;

  struct Encoded {
    std::vector<torch::Tensor> skips;  // [B, C_n, T, F_n]
    torch::Tensor latent;              // [B, T, d_d]
  };
  // spec_ri: [B, 2, T, 161]
  Encoded encode_spectrum(const torch::Tensor& spec_ri);
  // Returns the estimated (real, imag) spectrum [B, 2, T, 161].
  torch::Tensor decode_spectrum(const Encoded& enc);
  // Frequency sizes of the encoder, input first.
  static std::vector<int64_t> bin_schedule(int64_t bins, int64_t blocks);

 private:
  torch::nn::ModuleList enc_a_, enc_b_;
  torch::nn::LSTM lstm_{nullptr};
  torch::nn::ModuleList dec_real_a_, dec_real_b_, dec_imag_a_, dec_imag_b_;
  torch::nn::ConvTranspose2d out_real_{nullptr}, out_imag_{nullptr};
  std::vector<int64_t> bins_;
};
TORCH_MODULE(Gcrn);

struct ComplexLstmOutput {
  torch::Tensor real, imag;  // [B, T, H]
};

// Complex convolutional encoder, complex LSTM and the latent projection;
// optionally a complex ratio mask decoder.
class DccrnImpl : public DiscModelImpl {
 public:
  explicit DccrnImpl(const DiscModelConfig& cfg);
  torch::Tensor encode(const torch::Tensor& wav) override;
  torch::Tensor enhance(const torch::Tensor& wav) override;

  // H_n for each encoder layer; input is the complex spectrum [B, T, F].
  std::vector<ComplexTensor> encode_layers(const torch::Tensor& spec);
  // H: encoder output [B, C, T, F]. Returns D_L [B, T, d_d].
  torch::Tensor bottleneck(const ComplexTensor& h);
  ComplexLstmOutput complex_lstm(const ComplexTensor& h);

 private:
  torch::nn::ModuleList encoder_;
  torch::nn::LSTM lstm_r_{nullptr}, lstm_i_{nullptr};
  torch::nn::Linear proj_{nullptr};
  torch::nn::Linear unproj_{nullptr};
  torch::nn::ModuleList decoder_;
  int64_t enc_bins_ = 0;
};
TORCH_MODULE(Dccrn);

using DiscModelPtr = std::shared_ptr<DiscModelImpl>;

// Throws InvalidConfig for the reserved kinds.
DiscModelPtr make_disc_model(const DiscModelConfig& cfg);

// Objective used to train the discriminative models: a scale-invariant
// waveform term 10 log10(||s_hat||^2 ||s||^2 / <s_hat, s>^2), which is zero
// for a perfect (scaled) estimate, plus L1 distance of STFT magnitudes.
torch::Tensor disc_training_loss(const torch::Tensor& estimate, const torch::Tensor& clean,
                                 const StftConfig& cfg);

}  // namespace discogan
