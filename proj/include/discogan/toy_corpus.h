// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "discogan/audio.h"

namespace discogan {

// Voiced syllables: a gliding harmonic source shaped by two formant-like
// resonances under syllabic amplitude envelopes, with short pauses.
AudioBuffer toy_speech(uint64_t seed, double seconds);

enum class ToyNoise { kWhite, kPink, kBrown, kHum, kBabble };

std::string to_string(ToyNoise kind);
std::vector<ToyNoise> all_toy_noises();
AudioBuffer toy_noise(ToyNoise kind, uint64_t seed, double seconds);

struct ToyCorpus {
  std::filesystem::path clean_dir;
  std::filesystem::path noise_dir;
};

// Writes num_clean utterances and num_noise noise files as 16 kHz WAVs.
ToyCorpus write_toy_corpus(const std::filesystem::path& root, int num_clean, int num_noise,
                           double seconds, uint64_t seed);

}  // namespace discogan
