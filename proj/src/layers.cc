// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/layers.h"

#include <cmath>

namespace discogan {

std::array<int64_t, 2> same_padding(int64_t kernel, int64_t dilation) {
  const int64_t total = dilation * (kernel - 1);
  return {total / 2, total - total / 2};
}

namespace {

// Norm of v over every dimension except `keep`, broadcastable against v.
torch::Tensor norm_except(const torch::Tensor& v, int64_t keep) {
  std::vector<int64_t> dims;
  for (int64_t d = 0; d < v.dim(); ++d) {
    if (d != keep) dims.push_back(d);
  }
  return torch::sqrt(v.pow(2).sum(dims, /*keepdim=*/true));
}

void kaiming_uniform(torch::Tensor& v) {
  // The library default for conv layers (a = sqrt(5), fan-in mode).
  torch::nn::init::kaiming_uniform_(v, std::sqrt(5.0));
}

}  // namespace

WnConv2dImpl::WnConv2dImpl(const WnConv2dOptions& opts) : opts_(opts) {
  v_ = register_parameter(
      "v", torch::empty({opts.out_channels, opts.in_channels, opts.kernel.h, opts.kernel.w}));
  kaiming_uniform(v_);
  if (opts.weight_norm) {
    torch::NoGradGuard no_grad;
    g_ = register_parameter("g", norm_except(v_, 0).clone());
  }
  if (opts.bias) bias_ = register_parameter("bias", torch::zeros({opts.out_channels}));
}

torch::Tensor WnConv2dImpl::weight() const {
  if (!opts_.weight_norm) return v_;
  return g_ * v_ / norm_except(v_, 0);
}

torch::Tensor WnConv2dImpl::forward(const torch::Tensor& x) {
  auto h = x;
  if (opts_.pad[0] || opts_.pad[1] || opts_.pad[2] || opts_.pad[3]) {
    h = torch::constant_pad_nd(h, {opts_.pad[0], opts_.pad[1], opts_.pad[2], opts_.pad[3]});
  }
  const std::array<int64_t, 2> stride{opts_.stride.h, opts_.stride.w};
  const std::array<int64_t, 2> padding{0, 0};
  const std::array<int64_t, 2> dilation{opts_.dilation.h, opts_.dilation.w};
  return torch::conv2d(h, weight(), opts_.bias ? bias_ : torch::Tensor(), stride, padding,
                       dilation);
}

WnConvTranspose2dImpl::WnConvTranspose2dImpl(const WnConvTranspose2dOptions& opts)
    : opts_(opts) {
  v_ = register_parameter(
      "v", torch::empty({opts.in_channels, opts.out_channels, opts.kernel.h, opts.kernel.w}));
  kaiming_uniform(v_);
  if (opts.weight_norm) {
    torch::NoGradGuard no_grad;
    g_ = register_parameter("g", norm_except(v_, 1).clone());
  }
  if (opts.bias) bias_ = register_parameter("bias", torch::zeros({opts.out_channels}));
}

torch::Tensor WnConvTranspose2dImpl::weight() const {
  if (!opts_.weight_norm) return v_;
  return g_ * v_ / norm_except(v_, 1);
}

torch::Tensor WnConvTranspose2dImpl::forward(const torch::Tensor& x) {
  const std::array<int64_t, 2> stride{opts_.stride.h, opts_.stride.w};
  const std::array<int64_t, 2> padding{opts_.padding.h, opts_.padding.w};
  const std::array<int64_t, 2> output_padding{opts_.output_padding.h, opts_.output_padding.w};
  return torch::conv_transpose2d(x, weight(), opts_.bias ? bias_ : torch::Tensor(), stride,
                                 padding, output_padding);
}

WnConv1dImpl::WnConv1dImpl(int64_t in_channels, int64_t out_channels, int64_t kernel)
    : kernel_(kernel) {
  v_ = register_parameter("v", torch::empty({out_channels, in_channels, kernel}));
  kaiming_uniform(v_);
  {
    torch::NoGradGuard no_grad;
    g_ = register_parameter("g", norm_except(v_, 0).clone());
  }
  bias_ = register_parameter("bias", torch::zeros({out_channels}));
}

torch::Tensor WnConv1dImpl::forward(const torch::Tensor& x) {
  const auto pad = same_padding(kernel_);
  auto h = torch::constant_pad_nd(x, {pad[0], pad[1]});
  return torch::conv1d(h, g_ * v_ / norm_except(v_, 0), bias_);
}

void init_lstm(torch::nn::LSTM& lstm) {
  torch::NoGradGuard no_grad;
  for (auto& p : lstm->named_parameters()) {
    const auto& name = p.key();
    auto& t = p.value();
    if (name.find("weight_hh") != std::string::npos) {
      // One orthogonal block per gate.
      for (auto& block : t.chunk(4, 0)) torch::nn::init::orthogonal_(block);
    } else if (name.find("bias") != std::string::npos) {
      t.zero_();
    }
  }
}

std::vector<torch::Tensor> parameter_list(const torch::nn::Module& module) {
  std::vector<torch::Tensor> out;
  for (const auto& p : module.named_parameters(/*recurse=*/true)) out.push_back(p.value());
  return out;
}

int64_t parameter_count(const torch::nn::Module& module) {
  int64_t n = 0;
  for (const auto& p : module.parameters()) n += p.numel();
  return n;
}

void set_frozen(torch::nn::Module& module, bool frozen) {
  for (auto& p : module.parameters()) p.set_requires_grad(!frozen);
  if (frozen) {
    module.eval();
  } else {
    module.train();
  }
}

}  // namespace discogan
