// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/random.h"

#include <cstdio>
#include <sstream>

#include "discogan/errors.h"

namespace discogan {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

uint64_t fnv1a64(std::string_view data) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

uint64_t substream_seed(uint64_t master_seed, std::string_view name) {
  return splitmix64(master_seed ^ fnv1a64(name));
}

uint64_t item_seed(uint64_t master_seed, uint64_t index) {
  return splitmix64(splitmix64(master_seed) + index);
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

double uniform_real(Rng& rng, double lo, double hi) {
  // 53 random mantissa bits -> [0, 1)
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

int64_t uniform_int(Rng& rng, int64_t lo, int64_t hi) {
  if (hi < lo) throw InvalidInput("uniform_int: empty range");
  const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<int64_t>(rng());
  // rejection sampling to avoid modulo bias
  const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return lo + static_cast<int64_t>(r % span);
}

std::string serialize_rng(const Rng& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

Rng deserialize_rng(const std::string& state) {
  Rng rng;
  std::istringstream is(state);
  is >> rng;
  if (!is) throw InvalidConfig("corrupt RNG state");
  return rng;
}

}  // namespace discogan
