// rng.hpp - counter-based random source for reproducible disorder sampling.
//
// All draws are pure functions of (seed, stream index): the n-th output of
// SplitMix64 started at `seed` is mix64(seed + n * GAMMA), so per-site values
// can be generated in any order (or in parallel) and always agree bit for bit.

#pragma once

#include <cstdint>

namespace srhf {

namespace detail {
constexpr std::uint64_t kSplitMixGamma = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// n-th word of the SplitMix64 sequence seeded at `seed`.
inline std::uint64_t counter_u64(std::uint64_t seed, std::uint64_t stream) {
  return detail::mix64(seed + (stream + 1) * detail::kSplitMixGamma);
}

// Uniform double in [0, 1) with 53 random bits.
inline double counter_u01(std::uint64_t seed, std::uint64_t stream) {
  return static_cast<double>(counter_u64(seed, stream) >> 11) * 0x1.0p-53;
}

}  // namespace srhf
