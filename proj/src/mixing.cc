// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/mixing.h"

#include <cmath>

#include "discogan/errors.h"

namespace discogan {

MixResult mix_at_snr(const AudioBuffer& clean, const AudioBuffer& noise, double snr_db) {
  if (clean.size() != noise.size()) {
    throw InvalidInput("mix_at_snr: clean and noise lengths differ (" +
                       std::to_string(clean.size()) + " vs " +
                       std::to_string(noise.size()) + ")");
  }
  if (!std::isfinite(snr_db)) throw InvalidInput("mix_at_snr: non-finite SNR");
  const double p_clean = mean_power(clean.view());
  const double p_noise = mean_power(noise.view());
  if (p_clean <= 0.0) throw DegenerateInput("mix_at_snr: clean signal is silent");
  if (p_noise <= 0.0) throw DegenerateInput("mix_at_snr: noise signal is silent");

  const double gain = std::sqrt(p_clean / (p_noise * std::pow(10.0, snr_db / 10.0)));
  MixResult out;
  out.applied_gain = gain;
  out.mixture.sample_rate = clean.sample_rate;
  out.mixture.samples.resize(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    out.mixture.samples[i] =
        static_cast<float>(static_cast<double>(clean.samples[i]) + gain * noise.samples[i]);
  }
  return out;
}

double measured_snr_db(const AudioBuffer& clean, const AudioBuffer& noise, double gain) {
  return 10.0 * std::log10(mean_power(clean.view()) /
                           (gain * gain * mean_power(noise.view())));
}

AudioBuffer fit_length(const AudioBuffer& noise, std::size_t length, Rng& rng) {
  if (noise.empty()) throw InvalidInput("fit_length: empty noise");
  AudioBuffer out;
  out.sample_rate = noise.sample_rate;
  out.samples.resize(length);
  const std::size_t n = noise.size();
  if (n >= length) {
    const auto start = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int64_t>(n - length)));
    std::copy_n(noise.samples.begin() + static_cast<std::ptrdiff_t>(start), length,
                out.samples.begin());
  } else {
    const auto offset = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int64_t>(n - 1)));
    for (std::size_t i = 0; i < length; ++i) out.samples[i] = noise.samples[(offset + i) % n];
  }
  return out;
}

AudioBuffer convolve(const AudioBuffer& x, const AudioBuffer& impulse_response) {
  if (impulse_response.empty()) throw InvalidInput("convolve: empty impulse response");
  auto xt = to_tensor(x, torch::kFloat64).view({1, 1, -1});
  // conv1d is a correlation; flip the kernel for a convolution.
  auto ht = to_tensor(impulse_response, torch::kFloat64).flip(0).view({1, 1, -1});
  const int64_t k = ht.size(-1);
  auto y = torch::conv1d(torch::constant_pad_nd(xt, {k - 1, 0}), ht);
  return from_tensor(y.view({-1}), x.sample_rate);
}

double sample_snr(Rng& rng, const SnrRange& range) {
  return uniform_real(rng, range.lo_db, range.hi_db);
}

}  // namespace discogan
