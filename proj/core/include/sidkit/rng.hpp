#pragma once

#include <cstdint>
#include <random>

namespace sidkit {

using Engine = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds from a
// (seed, stream index) pair so that results never depend on scheduling.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ (stream * 0xd1342543de82ef95ULL + 1));
}

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace sidkit
