// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include "discogan/audio.h"
#include "discogan/random.h"

namespace discogan {

struct MixResult {
  AudioBuffer mixture;
  double applied_gain = 1.0;  // scale applied to the noise
};

// mixture = clean + g * noise with g chosen so that
// 10 log10(P_clean / P_{g noise}) == snr_db. Lengths must match; throws
// DegenerateInput if either signal is silent.
MixResult mix_at_snr(const AudioBuffer& clean, const AudioBuffer& noise, double snr_db);

// 10 log10(P_clean / P_{gain * noise}).
double measured_snr_db(const AudioBuffer& clean, const AudioBuffer& noise, double gain);

// Shorter noise is tiled starting at a random circular offset; longer noise
// is cropped at a random position.
AudioBuffer fit_length(const AudioBuffer& noise, std::size_t length, Rng& rng);

// Linear convolution truncated to the input length.
AudioBuffer convolve(const AudioBuffer& x, const AudioBuffer& impulse_response);

// Mixing SNR ranges of the training sets.
struct SnrRange {
  double lo_db;
  double hi_db;
  static SnrRange low_snr() { return {-25.0, 0.0}; }
  static SnrRange high_snr() { return {-5.0, 30.0}; }
};

double sample_snr(Rng& rng, const SnrRange& range);

}  // namespace discogan
