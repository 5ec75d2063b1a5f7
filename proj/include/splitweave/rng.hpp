#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace splitweave {

using Seed = std::uint64_t;

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// 64-bit FNV-1a.
constexpr std::uint64_t hash_string(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : text) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Substream key for (master, purpose, index).
constexpr Seed derive_seed(Seed master, std::string_view purpose, std::uint64_t index = 0) {
  return mix64(mix64(master ^ hash_string(purpose)) + (index + 1) * kGoldenGamma);
}

/// Counter-based generator: the i-th draw is mix64(key + i * gamma). Every
/// draw is a pure function of (key, i), so streams are identical on every
/// platform and can be split freely with derive_seed.
class Stream {
 public:
  explicit constexpr Stream(Seed key) : key_(key) {}

  constexpr std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGoldenGamma); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  // Uniform integer in [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool chance(double p) { return uniform() < p; }

  // Index drawn proportionally to non-negative weights.
  std::size_t weighted(std::span<const double> weights) {
    double total = 0;
    for (double w : weights) total += w;
    double u = uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (u < weights[i]) return i;
      u -= weights[i];
    }
    for (std::size_t i = weights.size(); i-- > 0;)
      if (weights[i] > 0) return i;
    return 0;
  }

  template <typename T>
  const T& pick(std::span<const T> items) {
    return items[below(items.size())];
  }

 private:
  Seed key_;
  std::uint64_t counter_ = 0;
};

}  // namespace splitweave
