#include "rsp/random.hpp"

namespace rsp {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer
std::uint64_t scramble(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream RandomStream::for_trial(std::uint64_t seed,
                                     std::uint64_t trial_index) {
  return RandomStream(scramble(scramble(seed + kGolden) +
                               (trial_index + 1) * kGolden));
}

std::uint64_t RandomStream::next_u64() {
  state_ += kGolden;
  return scramble(state_);
}

}  // namespace rsp
