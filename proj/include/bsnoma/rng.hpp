#pragma once

#include <cmath>
#include <cstdint>

namespace bsnoma {

// Counter-based random draws built on the splitmix64 finalizer. Every draw is
// a pure function of (seed, stream indices), so results are reproducible
// across platforms, thread counts, and call orders. Gains drawn for cell s
// do not depend on how many other cells exist, which keeps channel
// realizations matched across network sizes sharing a seed.
//
// Algorithm name recorded in output metadata: "splitmix64-counter/inverse-cdf".

namespace rng {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  return mix((h + kGolden) ^ v);
}

template <typename... Rest>
constexpr std::uint64_t hash(std::uint64_t seed, Rest... rest) {
  std::uint64_t h = mix(seed + kGolden);
  ((h = combine(h, static_cast<std::uint64_t>(rest))), ...);
  return h;
}

// Uniform in [0, 1) using the top 53 bits.
inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Exponential with the given mean via inverse CDF. to_unit() < 1 strictly,
// so the result is finite.
inline double exponential(std::uint64_t bits, double mean) {
  return -std::log1p(-to_unit(bits)) * mean;
}

}  // namespace rng

inline constexpr const char* kRngAlgorithm = "splitmix64-counter/inverse-cdf";

}  // namespace bsnoma
