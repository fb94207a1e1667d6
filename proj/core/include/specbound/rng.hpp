#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, counter), so parallel sampling is order-independent.

#include <cmath>
#include <cstdint>

#include "specbound/common.hpp"

namespace specbound::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
}

/// Uniform in (0, 1), never exactly 0 or 1.
inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return (static_cast<double>(hash(seed, stream, counter) >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal by Box-Muller on two counter slots.
inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const double u1 = uniform(seed, stream, 2 * counter);
  const double u2 = uniform(seed, stream, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

/// +-1 with equal probability.
inline double sign(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return (hash(seed, stream, counter) >> 63) ? 1.0 : -1.0;
}

}  // namespace specbound::rng
