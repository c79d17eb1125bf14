#pragma once

#include <cstdint>

namespace maxident::rng {

// Counter-based uniform generator built from the SplitMix64 finalizer
// (Steele, Lea & Flood 2014). A draw is a pure function of
// (seed, stream, counter): no state is carried between draws, so sampling
// loops can be split across threads in any order and still produce the same
// bits, and the same triple always yields the same value on every platform
// (integer ops plus one exact double conversion).
//
// Stream conventions used by the library:
//   sample():        stream = caller-supplied (component index), counter = i
//   sample_joint():  streams 0..3 = X, Y, Z1, Z2,   counter = draw index
//   sample_maxind(): stream = 5*attempt + k, k in 0..3 coordinates,
//                    k = 4 acceptance uniform,        counter = draw index

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t bits(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t counter) {
  std::uint64_t z = mix64(seed + kGamma);
  z = mix64(z + kGamma * (stream + 1));
  z = mix64(z + kGamma * (counter + 1));
  return z;
}

// Uniform in the open interval (0,1): top 53 bits shifted by half an ulp so
// neither endpoint is reachable (quantile transforms stay finite).
constexpr double uniform_open(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) {
  return (static_cast<double>(bits(seed, stream, counter) >> 11) + 0.5) *
         0x1.0p-53;
}

}  // namespace maxident::rng
