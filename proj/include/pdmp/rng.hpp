#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace pdmp {

// xoshiro256** seeded through SplitMix64. Stream k starts k long jumps
// (2^128 draws each) past stream 0, so chains simulated on distinct streams
// of one seed never overlap. All derived variates (uniform, normal,
// exponential) are computed here rather than through <random> distributions
// so that output is identical across standard library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on the open interval (0, 1).
  double uniform_open();
  double normal();
  double exponential(double rate);

  // Independent generator for another stream of the same seed.
  Rng split(std::uint64_t stream) const { return Rng(seed_, stream); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void jump();

  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_;
  std::uint64_t stream_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pdmp
