// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/losses.h"

#include <algorithm>
#include <cmath>

#include "discogan/errors.h"
#include "discogan/stft.h"

namespace discogan {

void LossWeights::validate() const {
  for (double w : {time, freq, adv, feat}) {
    if (!std::isfinite(w) || w < 0) throw InvalidConfig("loss weights must be finite and >= 0");
  }
}

nlohmann::json LossWeights::to_json() const {
  return {{"lambda_t", time}, {"lambda_f", freq}, {"lambda_adv", adv}, {"lambda_feat", feat}};
}

LossWeights LossWeights::from_json(const nlohmann::json& j) {
  LossWeights w;
  w.time = j.value("lambda_t", w.time);
  w.freq = j.value("lambda_f", w.freq);
  w.adv = j.value("lambda_adv", w.adv);
  w.feat = j.value("lambda_feat", w.feat);
  return w;
}

void SpectralResolutionSet::validate() const {
  if (exponents.empty()) throw InvalidConfig("spectral loss needs at least one resolution");
  for (int i : exponents) {
    if (i < 3 || i > 16) throw InvalidConfig("spectral loss exponent out of range");
  }
  if (!(fmin >= 0 && fmax > fmin)) throw InvalidConfig("mel band edges must satisfy 0 <= fmin < fmax");
  if (!(log_floor > 0)) throw InvalidConfig("log floor must be positive");
}

int SpectralResolutionSet::max_window() const {
  return 1 << *std::max_element(exponents.begin(), exponents.end());
}

int SpectralResolutionSet::mel_bins(int exponent) { return std::max(5, (1 << exponent) / 8); }

namespace {
constexpr double kMelLinearStep = 200.0 / 3.0;
constexpr double kMelBreakHz = 1000.0;
const double kMelLogStep = std::log(6.4) / 27.0;
}  // namespace

double hz_to_mel_slaney(double hz) {
  if (hz < kMelBreakHz) return hz / kMelLinearStep;
  return kMelBreakHz / kMelLinearStep + std::log(hz / kMelBreakHz) / kMelLogStep;
}

double mel_to_hz_slaney(double mel) {
  const double break_mel = kMelBreakHz / kMelLinearStep;
  if (mel < break_mel) return mel * kMelLinearStep;
  return kMelBreakHz * std::exp(kMelLogStep * (mel - break_mel));
}

torch::Tensor mel_filterbank(int n_fft, int n_mels, double fmin, double fmax, int sample_rate,
                             torch::Dtype dtype, bool area_norm) {
  if (n_fft <= 0 || n_mels <= 0) throw InvalidConfig("mel filterbank sizes must be positive");
  const int n_freq = n_fft / 2 + 1;
  std::vector<double> edges(n_mels + 2);
  const double lo = hz_to_mel_slaney(fmin), hi = hz_to_mel_slaney(fmax);
  for (int m = 0; m < n_mels + 2; ++m) {
    edges[m] = mel_to_hz_slaney(lo + (hi - lo) * m / (n_mels + 1));
  }
  auto fb = torch::zeros({n_mels, n_freq}, torch::kFloat64);
  auto acc = fb.accessor<double, 2>();
  for (int m = 0; m < n_mels; ++m) {
    const double left = edges[m], centre = edges[m + 1], right = edges[m + 2];
    const double norm = area_norm ? 2.0 / (right - left) : 1.0;
    for (int k = 0; k < n_freq; ++k) {
      const double f = static_cast<double>(k) * sample_rate / n_fft;
      const double up = (f - left) / (centre - left);
      const double down = (right - f) / (right - centre);
      acc[m][k] = std::max(0.0, std::min(up, down)) * norm;
    }
  }
  return fb.to(dtype);
}

namespace {

torch::Tensor as_batch(const torch::Tensor& x) { return x.dim() == 1 ? x.unsqueeze(0) : x; }

void check_pair(const torch::Tensor& a, const torch::Tensor& b, const char* who) {
  if (a.sizes() != b.sizes()) {
    throw InvalidInput(std::string(who) + ": clean and estimate differ in shape");
  }
  if (a.dim() != 1 && a.dim() != 2) throw InvalidInput(std::string(who) + ": expected [B, N]");
}

// Mean over items of ||a - b||_F / ||a||_F, norms over the trailing two dims.
torch::Tensor relative_frobenius(const torch::Tensor& target, const torch::Tensor& est) {
  auto num = (target - est).pow(2).sum({-2, -1}).sqrt();
  auto den = target.pow(2).sum({-2, -1}).sqrt();
  return (num / den).mean();
}

}  // namespace

torch::Tensor loss_time(const torch::Tensor& clean, const torch::Tensor& estimate) {
  check_pair(clean, estimate, "loss_time");
  return (clean - estimate).abs().mean();
}

torch::Tensor loss_freq(const torch::Tensor& clean, const torch::Tensor& estimate,
                        const SpectralResolutionSet& res) {
  check_pair(clean, estimate, "loss_freq");
  res.validate();
  auto s = as_batch(clean), e = as_batch(estimate);
  if (s.size(1) < res.max_window()) {
    throw InvalidInput("loss_freq: signals of " + std::to_string(s.size(1)) +
                       " samples are shorter than the largest resolution (" +
                       std::to_string(res.max_window()) + ")");
  }
  torch::Tensor total;
  for (int i : res.exponents) {
    const auto cfg = StftConfig::resolution(1 << i);
    auto power = [&](const torch::Tensor& x) {
      auto spec = stft(x, cfg);  // [B, F, T]
      return torch::real(spec).pow(2) + torch::imag(spec).pow(2);
    };
    auto ps = power(s), pe = power(e);
    auto fb = mel_filterbank(cfg.fft_length, SpectralResolutionSet::mel_bins(i), res.fmin,
                             res.fmax, kSampleRate, ps.scalar_type());
    auto log_p = [&](const torch::Tensor& p) { return torch::log(p + res.log_floor); };
    auto log_m = [&](const torch::Tensor& p) { return torch::log(torch::matmul(fb, p) + res.log_floor); };
    auto p_s = log_p(ps), p_e = log_p(pe), m_s = log_m(ps), m_e = log_m(pe);
    auto term = (p_s - p_e).abs().mean() + relative_frobenius(p_s, p_e) +
                (m_s - m_e).abs().mean() + relative_frobenius(m_s, m_e);
    total = total.defined() ? total + term : term;
  }
  return total / static_cast<double>(res.exponents.size());
}

namespace {

void check_logits(const DiscriminatorOutput& out, const char* who) {
  if (out.logits.empty()) throw InvalidInput(std::string(who) + ": no discriminator logits");
}

torch::Tensor mean_over_scales(const std::vector<torch::Tensor>& logits,
                               const std::function<torch::Tensor(const torch::Tensor&)>& term) {
  torch::Tensor acc;
  for (const auto& l : logits) {
    auto t = term(l).mean();
    acc = acc.defined() ? acc + t : t;
  }
  return acc / static_cast<double>(logits.size());
}

}  // namespace

torch::Tensor loss_adv_generator(const DiscriminatorOutput& fake) {
  check_logits(fake, "loss_adv_generator");
  return mean_over_scales(fake.logits, [](const torch::Tensor& l) { return torch::relu(1 - l); });
}

torch::Tensor loss_discriminator(const DiscriminatorOutput& real, const DiscriminatorOutput& fake) {
  check_logits(real, "loss_discriminator");
  check_logits(fake, "loss_discriminator");
  if (real.logits.size() != fake.logits.size()) {
    throw InvalidInput("loss_discriminator: real and fake banks have different scale counts");
  }
  for (std::size_t k = 0; k < real.logits.size(); ++k) {
    if (real.logits[k].sizes() != fake.logits[k].sizes()) {
      throw InvalidInput("loss_discriminator: logit shapes differ at scale " + std::to_string(k));
    }
  }
  return mean_over_scales(real.logits, [](const torch::Tensor& l) { return torch::relu(1 - l); }) +
         mean_over_scales(fake.logits, [](const torch::Tensor& l) { return torch::relu(1 + l); });
}

torch::Tensor loss_feature_matching(const DiscriminatorOutput& real,
                                    const DiscriminatorOutput& fake) {
  if (real.features.size() != fake.features.size() || real.features.empty()) {
    throw InvalidInput("loss_feature_matching: scale counts differ or are zero");
  }
  torch::Tensor acc;
  std::size_t terms = 0;
  for (std::size_t k = 0; k < real.features.size(); ++k) {
    const auto& fr = real.features[k];
    const auto& ff = fake.features[k];
    if (fr.size() != ff.size() || fr.empty()) {
      throw InvalidInput("loss_feature_matching: layer counts differ at scale " +
                         std::to_string(k));
    }
    for (std::size_t l = 0; l < fr.size(); ++l) {
      if (fr[l].sizes() != ff[l].sizes()) {
        throw InvalidInput("loss_feature_matching: feature shapes differ");
      }
      auto t = (fr[l].detach() - ff[l]).abs().mean();
      acc = acc.defined() ? acc + t : t;
      ++terms;
    }
  }
  return acc / static_cast<double>(terms);
}

double loss_time(const AudioBuffer& clean, const AudioBuffer& estimate) {
  return loss_time(to_tensor(clean, torch::kFloat64), to_tensor(estimate, torch::kFloat64))
      .item<double>();
}

double loss_freq(const AudioBuffer& clean, const AudioBuffer& estimate,
                 const SpectralResolutionSet& res) {
  return loss_freq(to_tensor(clean, torch::kFloat64), to_tensor(estimate, torch::kFloat64), res)
      .item<double>();
}

double total_generator_loss(const LossReport& parts, const LossWeights& w) {
  w.validate();
  return parts.l_t * w.time + parts.l_f * w.freq + w.adv * parts.l_adv + w.feat * parts.l_feat;
}

torch::Tensor total_generator_loss(const torch::Tensor& l_t, const torch::Tensor& l_f,
                                   const torch::Tensor& l_adv, const torch::Tensor& l_feat,
                                   const LossWeights& w) {
  w.validate();
  return l_t * w.time + l_f * w.freq + l_adv * w.adv + l_feat * w.feat;
}

}  // namespace discogan
