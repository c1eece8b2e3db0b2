#pragma once

#include <cstdint>

namespace rsp {

/// Deterministic splitmix64 stream. Used instead of the standard
/// distributions so that sampled runs are bit-identical across platforms
/// and standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  /// Stream for one trial, derived from (seed, trial_index) only.
  /// Trials are order-independent: expanding the master seed this way
  /// gives every trial its own counter-based stream.
  static RandomStream for_trial(std::uint64_t seed, std::uint64_t trial_index);

  std::uint64_t next_u64();

  /// Uniform draw in [0, 1) with 53 bits of precision.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace rsp
