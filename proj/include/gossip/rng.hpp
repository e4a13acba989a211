#pragma once

#include <array>
#include <cstdint>

namespace gossip {

/// SplitMix64 step, used to expand seeds into well-mixed generator state.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** generator with splittable streams.
///
/// A stream is identified by (seed, stream_id). Streams with distinct ids are
/// statistically independent and individually reproducible, so Monte Carlo
/// replicates can be scheduled in any order without changing their draws.
/// The generator is self-contained (no std::uniform_real_distribution), which
/// keeps sequences identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream_id = 0) {
    std::uint64_t sm = seed;
    splitmix64_next(sm);
    sm ^= 0xd1b54a32d192ed03ULL * (stream_id + 1);
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, bound). Bounds here are small (agent and edge
  /// counts), so the modulo bias of a 64-bit draw is far below 2^-40.
  std::uint64_t below(std::uint64_t bound) { return next_u64() % bound; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

// Stream ids reserved for initial-condition sampling; Monte Carlo replicate
// r uses stream id r, so these stay out of the replicate range.
inline constexpr std::uint64_t kStreamInitX0 = 0x8000000000000001ULL;
inline constexpr std::uint64_t kStreamInitZs = 0x8000000000000002ULL;

}  // namespace gossip
