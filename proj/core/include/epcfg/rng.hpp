#pragma once

#include <cstdint>

namespace epcfg {

// Deterministic pseudo-random source (xoshiro256++ seeded through
// SplitMix64). The library owns its generator instead of using <random>
// distributions because their algorithms are implementation-defined, and
// simulation outputs here are contractually byte-stable for a fixed seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double uniform01();

  // Standard normal via the Box-Muller transform (pairs are cached).
  double normal();

 private:
  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stable per-index seed derivation, so batch runs can hand every trajectory
// its own statistically independent stream regardless of execution order.
std::uint64_t substream_seed(std::uint64_t base_seed, std::uint64_t index);

}  // namespace epcfg
