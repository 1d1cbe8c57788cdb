#pragma once

#include <cstdint>

namespace summability {

inline constexpr std::uint64_t kDefaultSeed = 0xCE5A;

// Deterministic across platforms and standard libraries, unlike the
// <random> distributions. Every seeded panel and test corpus draws from this.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi]
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

// Stateless per-index hash; lets a "random" sequence stay a pure function of k.
inline std::uint64_t hash_index(std::uint64_t seed, std::uint64_t k) {
  SplitMix64 g(seed ^ (k * 0x9E3779B97F4A7C15ULL + 0x85EBCA6BULL));
  return g.next();
}

inline double hash_unit(std::uint64_t seed, std::uint64_t k) {
  return static_cast<double>(hash_index(seed, k) >> 11) * 0x1.0p-53;
}

}  // namespace summability
