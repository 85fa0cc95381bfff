#pragma once

#include <cstdint>
#include <random>

namespace unipred {

// Platform-independent generator: std::mt19937_64 (its output sequence is
// fixed by the standard) with our own uniform conversion, since the standard
// distributions are implementation-defined.
//
// Stream splitting: trial t of a run seeded with s uses
//   Rng(splitmix64(s + (t + 1) * 0x9E3779B97F4A7C15))
// so trials are independent of execution order.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng for_trial(std::uint64_t seed, std::uint64_t trial);

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

 private:
  std::mt19937_64 engine_;
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline Rng Rng::for_trial(std::uint64_t seed, std::uint64_t trial) {
  return Rng(splitmix64(seed + (trial + 1) * 0x9E3779B97F4A7C15ULL));
}

}  // namespace unipred
