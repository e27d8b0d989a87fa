#pragma once

#include <array>
#include <cstdint>

namespace lovo {

/// xoshiro256** (Blackman and Vigna) with splitmix64 seeding.
///
/// Seeding: x = seed ^ (0xD1B54A32D192ED03 * (stream + 1)); the four state
/// words are four consecutive splitmix64 outputs started from x.
/// A uniform draw on [0, 1) is (next() >> 11) * 2^-53.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t& x);

}  // namespace lovo
