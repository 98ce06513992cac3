#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qmesh {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds an ordered list of integers into one 64-bit key.
constexpr std::uint64_t mix_keys(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t k : keys) {
    h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  }
  return h;
}

/// Top 53 bits mapped onto [0, 1).
constexpr double unit_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// std::uniform_real_distribution is implementation-defined; this is not.
inline double uniform01(Rng& rng) { return unit_from_bits(rng()); }

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

}  // namespace qmesh
