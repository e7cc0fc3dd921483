#ifndef HYPERNASH_RNG_HPP
#define HYPERNASH_RNG_HPP

#include <cstdint>
#include <string_view>

namespace hypernash {

/// splitmix64 finalizer (Steele, Lea, Flood / Vigna). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Counter-based random stream: every draw is a pure function of (key, counter),
/// so sampling is reproducible independent of evaluation order and thread count.
/// Streams are derived from a master seed plus a label, and can be split into
/// child streams indexed by integers.
class RngStream {
 public:
  explicit constexpr RngStream(std::uint64_t key) noexcept : key_(key) {}

  static constexpr RngStream from(std::uint64_t master_seed, std::string_view label) noexcept {
    return RngStream(mix64(master_seed + mix64(fnv1a64(label))));
  }

  constexpr RngStream child(std::uint64_t index) const noexcept {
    return RngStream(mix64(key_ + mix64(index ^ 0xda3e39cb94b95bdbULL)));
  }

  constexpr std::uint64_t key() const noexcept { return key_; }

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix64(key_ + counter * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform double in [0, 1), 53 random bits.
  constexpr double uniform01(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound), bound >= 1. Multiply-shift reduction;
  /// bias is below 2^-38 for the bounds used here.
  constexpr std::uint32_t below(std::uint64_t counter, std::uint32_t bound) const noexcept {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(bits(counter)) * bound) >> 64);
  }

 private:
  std::uint64_t key_;
};

}  // namespace hypernash

#endif  // HYPERNASH_RNG_HPP
