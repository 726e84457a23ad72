#pragma once

#include <cstdint>

namespace kvisim {

// Counter-based uniform generator (SplitMix64 finalizer over seed + counter).
// The value at (seed, counter) is a pure function of both arguments, so draws
// are independent of evaluation order and of how work is split across threads.
inline std::uint64_t counter_rng_u64(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Uniform double in [0, 1) with 53 random bits.
inline double counter_rng_unit(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(counter_rng_u64(seed, counter) >> 11) * 0x1.0p-53;
}

}  // namespace kvisim
