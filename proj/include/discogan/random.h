// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace discogan {

using Rng = std::mt19937_64;

uint64_t splitmix64(uint64_t x);

// Independent seed for a named consumer of a master seed.
uint64_t substream_seed(uint64_t master_seed, std::string_view name);
// Independent seed for item `index` of a master seed.
uint64_t item_seed(uint64_t master_seed, uint64_t index);

// Stable 64-bit FNV-1a, used for config hashes.
uint64_t fnv1a64(std::string_view data);
std::string hex64(uint64_t v);

// Draws that do not depend on libstdc++'s distribution implementations, so
// manifests stay identical across standard libraries.
double uniform_real(Rng& rng, double lo, double hi);
int64_t uniform_int(Rng& rng, int64_t lo, int64_t hi);  // inclusive

std::string serialize_rng(const Rng& rng);
Rng deserialize_rng(const std::string& state);

}  // namespace discogan
