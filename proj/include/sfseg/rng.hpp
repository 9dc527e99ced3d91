#pragma once

#include <array>
#include <cstdint>

namespace sfseg {

// SplitMix64 finalizer; also used to expand seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Child seed for task `index` of a run seeded with `seed`:
//   s = seed ^ (0x9E3779B97F4A7C15 * (index + 1)); return splitmix64(s).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

// xoshiro256** 1.0 with state expanded from a 64-bit seed by SplitMix64.
// Every derived draw below is defined in terms of next() only, so sequences
// are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n) by rejection; n > 0.
  std::uint64_t below(std::uint64_t n);
  // Standard normal via Box-Muller (one draw per call, no caching).
  double normal();

 private:
  std::array<std::uint64_t, 4> s_;
};

}  // namespace sfseg
