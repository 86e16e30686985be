#pragma once

#include <cstdint>

namespace equidist {

// Counter-based stream: the value depends only on (seed, stream, counter), so
// any evaluation order (serial or parallel) yields the same numbers.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t counter) noexcept {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t counter) noexcept {
  return static_cast<double>(counter_bits(seed, stream, counter) >> 11) *
         0x1.0p-53;
}

}  // namespace equidist
