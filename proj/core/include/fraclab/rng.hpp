#pragma once

#include <cstdint>

namespace fraclab {

// Counter-based SplitMix64: draw i is mix(seed + (i + 1) * golden).
class Rng {
 public:
  static constexpr std::uint64_t default_seed = 42;

  explicit Rng(std::uint64_t seed = default_seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  // Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  double normal();
  // Independent stream derived from (seed, key).
  Rng child(std::uint64_t key) const;

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace fraclab
