#pragma once

#include <cstdint>
#include <limits>

namespace renergy {

// SplitMix64 finalizer; used to derive substream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256** (Blackman & Vigna). Satisfies UniformRandomBitGenerator so
// the <random> distributions can draw from it.
class Rng {
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) {
    std::uint64_t z = seed;
    for (auto& w : s_) {
      z = mix64(z);
      w = z;
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

// Independent random processes drawn inside one trial.
enum class StreamId : std::uint64_t {
  EnergyCenters = 1,
  Users = 2,
  Fading = 3,
  Auxiliary = 4,
};

// Counter-based substream: the stream for (seed, trial, id) does not depend on
// how trials are scheduled, so any trial can be replayed in isolation.
inline Rng make_stream(std::uint64_t master_seed, std::uint64_t trial, StreamId id) {
  const std::uint64_t a = mix64(master_seed ^ 0x5851F42D4C957F2DULL);
  const std::uint64_t b = mix64(a + trial);
  return Rng(mix64(b ^ (static_cast<std::uint64_t>(id) * 0xD6E8FEB86659FD93ULL)));
}

}  // namespace renergy
