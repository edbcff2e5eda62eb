#pragma once

#include <cstdint>

namespace dacsurv {

// splitmix64: tiny splittable PRNG. Deterministic across platforms, which
// is what makes simulated datasets and benchmark replicates reproducible
// from a seed regardless of thread count or scheduling.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform draw strictly inside (0, 1); safe to pass through log() or an
  // inverse CDF without hitting the endpoints.
  double uniform01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
};

// Derives an independent stream for (seed, index) pairs: one per subject in
// the generators, one per replicate in the benchmark harness.
inline SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(seed);
  std::uint64_t a = g.next();
  std::uint64_t b = g.next();
  return SplitMix64(a ^ (b + 0x9E3779B97F4A7C15ULL * (index + 1)));
}

}  // namespace dacsurv
