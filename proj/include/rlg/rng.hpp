#pragma once

#include <cstdint>
#include <random>

namespace rlg {

/// SplitMix64 finalizer. Used to derive independent generator seeds from a
/// (seed, stream_index) pair.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of the generator behind stream `stream_index` of master seed `seed`:
///   mix64(seed ^ mix64(stream_index ^ 0xD1B54A32D192ED03)).
constexpr std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream_index) noexcept {
  return mix64(seed ^ mix64(stream_index ^ 0xD1B54A32D192ED03ULL));
}

/// Reproducible random stream. The generator is std::mt19937_64, whose output
/// sequence is fixed by the standard; bounded integers and doubles are drawn
/// with explicit algorithms instead of <random> distributions, whose outputs
/// are implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index)
      : seed_(seed), stream_index_(stream_index), engine_(derive_stream_seed(seed, stream_index)) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound); Lemire's multiply-and-reject method.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Independent child stream; children of distinct streams never collide in
  /// practice because the child seed mixes the parent's (seed, stream_index).
  RngStream child(std::uint64_t index) const {
    return RngStream(derive_stream_seed(seed_, stream_index_), index);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

}  // namespace rlg
