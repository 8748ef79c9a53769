#pragma once

#include <cstdint>
#include <vector>

namespace duelsim {

/// Deterministic random stream, identical on every platform.
///
/// Generator is xoshiro256** seeded through splitmix64. Streams are derived
/// from a (run seed, player, role) key so that one player's draws never
/// perturb another player's sequence, and so that different kinds of draws
/// (pair selection vs. candidate queries) stay on independent streams.
class Stream {
 public:
  Stream() : Stream(0) {}

  explicit Stream(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = split_mix(x);
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

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Unbiased uniform integer in [0, n). Rejection sampling on the top range.
  std::uint64_t uniform(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return next_double() < p; }

  /// Picks uniformly from `items`. A singleton is returned without consuming
  /// randomness; uniform-over-one is deterministic.
  template <typename T>
  T pick(const std::vector<T>& items) {
    if (items.size() == 1) return items.front();
    return items[static_cast<std::size_t>(uniform(items.size()))];
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t split_mix(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4];
};

/// Stream roles. `play` covers a player's in-round choices and its reward
/// draw; `candidate` covers winner-candidate queries, kept separate so that
/// querying a candidate does not shift the player's action trajectory.
enum class StreamRole : std::uint64_t { play = 1, candidate = 2 };

inline Stream make_stream(std::uint64_t run_seed, int player, StreamRole role) {
  std::uint64_t key = run_seed;
  key ^= 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(player) + 1);
  key = key * 0xBF58476D1CE4E5B9ULL + static_cast<std::uint64_t>(role);
  return Stream(key);
}

}  // namespace duelsim
