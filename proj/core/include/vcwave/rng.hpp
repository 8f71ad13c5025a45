#pragma once

#include <cstdint>

namespace vcwave {

/// Deterministic 64-bit linear congruential generator.
///
/// state <- 6364136223846793005 * state + 1442695040888963407 (Knuth's
/// MMIX constants), doubles taken from the top 53 bits. Used everywhere a
/// reproducible stream is needed (random initial data, randomized test
/// matrices) so that published numbers can be regenerated bit-for-bit.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ = 6364136223846793005ULL * state_ + 1442695040888963407ULL;
    return state_;
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace vcwave
