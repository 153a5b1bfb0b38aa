#pragma once

#include <cstdint>

namespace ordsep {

// SplitMix64 (Steele, Lea & Flood 2014; Vigna's public-domain constants).
// State advances by a fixed odd increment and the output is a bijective
// finalizer of the state, so any 64-bit seed gives a full-period stream and
// the generator is trivially counter-based.  Results are identical on every
// platform, which the simulation contract requires; std::mt19937_64 would
// also be portable but cannot be split cheaply per replicate.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  // Derived stream for a replicate/worker.  Streams for distinct indices
  // start at scrambled, effectively independent states, so partitioning
  // replicates across workers cannot change any replicate's draws.
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix(seed + kGolden * (index + 1)));
  }

  std::uint64_t next_u64() { return mix(state_ += kGolden); }

  // Uniform draw on the open interval (0, 1); safe to feed through inverse
  // distribution functions with singular endpoints.
  double next_unit_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace ordsep
