// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <torch/torch.h>

#include <array>
#include <cstdint>

namespace discogan {

// Kernel extent in (height, width) of the underlying tensor layout.
struct Extent2 {
  int64_t h = 1;
  int64_t w = 1;
};

// Explicit zero padding {left, right, top, bottom} as used by
// torch::constant_pad_nd on the last two dimensions.
using Pad2 = std::array<int64_t, 4>;

// Centred "same" padding for a stride-1 axis: (d (k - 1)) split with the
// extra sample on the trailing side.
std::array<int64_t, 2> same_padding(int64_t kernel, int64_t dilation = 1);

struct WnConv2dOptions {
  int64_t in_channels;
  int64_t out_channels;
  Extent2 kernel;
  Extent2 stride{1, 1};
  Extent2 dilation{1, 1};
  Pad2 pad{0, 0, 0, 0};
  bool bias = true;
  bool weight_norm = true;
};

// Conv2d with a weight-normalised kernel w = g * v / |v| (per output
// channel) and explicit zero padding.
class WnConv2dImpl : public torch::nn::Module {
 public:
  explicit WnConv2dImpl(const WnConv2dOptions& opts);
  torch::Tensor forward(const torch::Tensor& x);
  torch::Tensor weight() const;
  const WnConv2dOptions& options() const { return opts_; }

 private:
  WnConv2dOptions opts_;
  torch::Tensor v_, g_, bias_;
};
TORCH_MODULE(WnConv2d);

struct WnConvTranspose2dOptions {
  int64_t in_channels;
  int64_t out_channels;
  Extent2 kernel;
  Extent2 stride{1, 1};
  Extent2 padding{0, 0};
  Extent2 output_padding{0, 0};
  bool bias = true;
  bool weight_norm = true;
};

class WnConvTranspose2dImpl : public torch::nn::Module {
 public:
  explicit WnConvTranspose2dImpl(const WnConvTranspose2dOptions& opts);
  torch::Tensor forward(const torch::Tensor& x);
  torch::Tensor weight() const;

 private:
  WnConvTranspose2dOptions opts_;
  torch::Tensor v_, g_, bias_;
};
TORCH_MODULE(WnConvTranspose2d);

// Conv1d over [B, C, T] with centred padding.
class WnConv1dImpl : public torch::nn::Module {
 public:
  WnConv1dImpl(int64_t in_channels, int64_t out_channels, int64_t kernel);
  torch::Tensor forward(const torch::Tensor& x);

 private:
  int64_t kernel_;
  torch::Tensor v_, g_, bias_;
};
TORCH_MODULE(WnConv1d);

// Orthogonal recurrent weights and zero biases for every layer of an LSTM.
void init_lstm(torch::nn::LSTM& lstm);

// Flat list of every parameter of a module (name order).
std::vector<torch::Tensor> parameter_list(const torch::nn::Module& module);
int64_t parameter_count(const torch::nn::Module& module);

void set_frozen(torch::nn::Module& module, bool frozen);

}  // namespace discogan
