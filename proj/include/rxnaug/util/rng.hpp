//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_UTIL_RNG_HPP_
#define RXNAUG_UTIL_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace rxnaug {

// All randomness in the toolkit flows through these helpers. std::mt19937_64
// has a standardized output sequence, but the standard distributions do not,
// so bounded draws, shuffles and gaussians are implemented here to keep
// results bit-identical across platforms and standard libraries.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stable sub-stream derivation: hash a master seed together with a stream id.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x51ed2701a9b5d4f3ULL));
}

// FNV-1a, used for content-keyed seeding and file digests in manifests.
constexpr std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Uniform draw from [0, n) by rejection; n must be > 0.
inline std::size_t uniform_index(Rng &rng, std::size_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v = rng();
  while (v >= limit) {
    v = rng();
  }
  return static_cast<std::size_t>(v % n);
}

template <typename T>
void shuffle_inplace(Rng &rng, std::vector<T> &items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniform_index(rng, i)]);
  }
}

// Uniform real in [0, 1) with 53 bits of entropy.
inline double uniform_real(Rng &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Marsaglia polar method; deterministic given the engine state.
inline double normal(Rng &rng) {
  for (;;) {
    const double u = 2.0 * uniform_real(rng) - 1.0;
    const double v = 2.0 * uniform_real(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

}  // namespace rxnaug

#endif  // RXNAUG_UTIL_RNG_HPP_
