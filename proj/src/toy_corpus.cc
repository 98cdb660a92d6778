// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/toy_corpus.h"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "discogan/errors.h"
#include "discogan/random.h"

namespace discogan {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t to_samples(double seconds) {
  if (!(seconds > 0)) throw InvalidInput("toy signal duration must be positive");
  return static_cast<std::size_t>(std::llround(seconds * kSampleRate));
}

// Two-pole resonator coefficients for centre frequency f and bandwidth bw.
struct Resonator {
  double a1, a2, gain, y1 = 0, y2 = 0;
  Resonator(double f, double bw) {
    const double r = std::exp(-std::numbers::pi * bw / kSampleRate);
    a1 = 2 * r * std::cos(kTwoPi * f / kSampleRate);
    a2 = -r * r;
    gain = 1 - r;
  }
  double step(double x) {
    const double y = gain * x + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

void normalise_peak(std::vector<float>& x, double peak) {
  double m = 0;
  for (float v : x) m = std::max(m, static_cast<double>(std::abs(v)));
  if (m <= 0) return;
  for (float& v : x) v = static_cast<float>(v * peak / m);
}

double gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return n(rng);
}

}  // namespace

AudioBuffer toy_speech(uint64_t seed, double seconds) {
  const std::size_t n = to_samples(seconds);
  Rng rng(substream_seed(seed, "toy-speech"));
  std::vector<float> out(n, 0.0f);
  std::size_t pos = 0;
  double phase = 0;
  while (pos < n) {
    const auto syllable = static_cast<std::size_t>(uniform_real(rng, 0.12, 0.35) * kSampleRate);
    const auto pause = static_cast<std::size_t>(uniform_real(rng, 0.02, 0.12) * kSampleRate);
    const double f0_start = uniform_real(rng, 90, 220);
    const double f0_end = f0_start * uniform_real(rng, 0.8, 1.25);
    Resonator f1(uniform_real(rng, 300, 900), 90), f2(uniform_real(rng, 900, 2500), 140);
    const double level = uniform_real(rng, 0.4, 1.0);
    for (std::size_t k = 0; k < syllable && pos < n; ++k, ++pos) {
      const double t = static_cast<double>(k) / syllable;
      const double f0 = f0_start + (f0_end - f0_start) * t;
      phase += kTwoPi * f0 / kSampleRate;
      if (phase > kTwoPi) phase -= kTwoPi;
      double src = 0;
      for (int h = 1; h * f0 < 7000; ++h) src += std::sin(h * phase) / h;
      src += 0.05 * gaussian(rng);
      const double env = level * std::pow(std::sin(std::numbers::pi * t), 2);
      out[pos] = static_cast<float>(env * (f1.step(src) * 4 + f2.step(src) * 2));
    }
    pos += pause;
  }
  normalise_peak(out, 0.5);
  return AudioBuffer(std::move(out));
}

std::string to_string(ToyNoise kind) {
  switch (kind) {
    case ToyNoise::kWhite:
      return "white";
    case ToyNoise::kPink:
      return "pink";
    case ToyNoise::kBrown:
      return "brown";
    case ToyNoise::kHum:
      return "hum";
    case ToyNoise::kBabble:
      return "babble";
  }
  return "unknown";
}

std::vector<ToyNoise> all_toy_noises() {
  return {ToyNoise::kWhite, ToyNoise::kPink, ToyNoise::kBrown, ToyNoise::kHum, ToyNoise::kBabble};
}

AudioBuffer toy_noise(ToyNoise kind, uint64_t seed, double seconds) {
  const std::size_t n = to_samples(seconds);
  Rng rng(substream_seed(seed, "toy-noise-" + to_string(kind)));
  std::vector<float> out(n);
  switch (kind) {
    case ToyNoise::kWhite:
      for (auto& v : out) v = static_cast<float>(gaussian(rng));
      break;
    case ToyNoise::kPink: {
      // Paul Kellet's economy filter.
      double b0 = 0, b1 = 0, b2 = 0;
      for (auto& v : out) {
        const double w = gaussian(rng);
        b0 = 0.99765 * b0 + w * 0.0990460;
        b1 = 0.96300 * b1 + w * 0.2965164;
        b2 = 0.57000 * b2 + w * 1.0526913;
        v = static_cast<float>(b0 + b1 + b2 + w * 0.1848);
      }
      break;
    }
    case ToyNoise::kBrown: {
      double y = 0;
      for (auto& v : out) {
        y = 0.995 * y + gaussian(rng) * 0.1;
        v = static_cast<float>(y);
      }
      break;
    }
    case ToyNoise::kHum: {
      const double f = uniform_real(rng, 50, 120);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / kSampleRate;
        double s = 0;
        for (int h = 1; h <= 8; ++h) s += std::sin(kTwoPi * h * f * t) / h;
        out[i] = static_cast<float>(s + 0.1 * gaussian(rng));
      }
      break;
    }
    case ToyNoise::kBabble: {
      std::fill(out.begin(), out.end(), 0.0f);
      for (int talker = 0; talker < 4; ++talker) {
        const auto voice = toy_speech(splitmix64(seed + 7919 * (talker + 1)), seconds);
        for (std::size_t i = 0; i < n; ++i) out[i] += voice.samples[i];
      }
      break;
    }
  }
  normalise_peak(out, 0.5);
  return AudioBuffer(std::move(out));
}

ToyCorpus write_toy_corpus(const std::filesystem::path& root, int num_clean, int num_noise,
                           double seconds, uint64_t seed) {
  if (num_clean <= 0 || num_noise <= 0) throw InvalidInput("toy corpus needs files of each kind");
  ToyCorpus c{root / "clean", root / "noise"};
  std::filesystem::create_directories(c.clean_dir);
  std::filesystem::create_directories(c.noise_dir);
  char name[64];
  for (int i = 0; i < num_clean; ++i) {
    std::snprintf(name, sizeof name, "utt%04d.wav", i);
    write_wav(c.clean_dir / name, toy_speech(item_seed(seed, i), seconds));
  }
  const auto kinds = all_toy_noises();
  for (int i = 0; i < num_noise; ++i) {
    const auto kind = kinds[i % kinds.size()];
    std::snprintf(name, sizeof name, "%s%04d.wav", to_string(kind).c_str(), i);
    write_wav(c.noise_dir / name, toy_noise(kind, item_seed(seed + 1, i), seconds));
  }
  return c;
}

}  // namespace discogan
