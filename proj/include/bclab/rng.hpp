#pragma once

#include <cstdint>
#include <string_view>

namespace bclab {

/// SplitMix64 output mixer (Steele, Lea & Flood).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Independent stream key for replication `stream` under a user seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed ^ 0x6A09E667F3BCC909ULL) + mix64(stream + 0x9E3779B97F4A7C15ULL));
}

/// Counter-based generator: the i-th draw is mix64(key + i * golden). Any draw
/// can be recomputed from (key, i) alone, so streams are reproducible across
/// platforms and thread schedules.
class CounterRng {
 public:
  static constexpr std::string_view kName = "splitmix64-counter";
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t next() noexcept { return mix64(key_ + (++counter_) * kGamma); }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  constexpr bool bernoulli(double p) noexcept { return uniform() < p; }

  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace bclab
