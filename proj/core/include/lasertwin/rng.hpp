#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>

#include "lasertwin/constants.hpp"

namespace lasertwin::rng {

// All randomness in the library flows through the helpers below. The
// mt19937_64 bit stream is fully specified by the standard, and the normal
// transform is written out by hand, so seeded runs reproduce bit-for-bit
// across platforms (std::normal_distribution would not guarantee that).

/// Uniform double in [0, 1) from the top 53 bits of the engine output.
inline double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Standard normal draw via Box-Muller (one value per call, no caching).
inline double normal(std::mt19937_64& engine) {
  double u1 = uniform01(engine);
  double u2 = uniform01(engine);
  while (u1 <= 0.0) u1 = uniform01(engine);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * constants::kPi * u2);
}

/// splitmix64 step; used to derive independent substream seeds from one seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stateless key for (seed, t) draws: mixes the seed with the bit pattern of t.
inline std::uint64_t key_for(std::uint64_t seed, double t) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(t));
  std::memcpy(&bits, &t, sizeof(bits));
  std::uint64_t state = seed ^ 0x5851f42d4c957f2dULL;
  splitmix64(state);
  state ^= bits;
  return splitmix64(state);
}

}  // namespace lasertwin::rng
