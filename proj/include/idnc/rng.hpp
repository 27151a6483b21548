#pragma once

// Counter-based generator: output k of stream `key` is splitmix64(key + k * golden).
// Streams are keyed by hashing (master seed, coordinates...), so any cell of
// an experiment can be regenerated on its own, in any order, on any thread.
// Bounded draws and shuffles are implemented here rather than through
// <random> distributions so outputs are identical across standard libraries.

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <utility>

namespace idnc {

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stream key for (master, coordinates...).
inline constexpr std::uint64_t derive_key(std::uint64_t master,
                                          std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = mix64(master + golden_gamma);
  for (auto c : coords)
    h = mix64(h ^ mix64(c + golden_gamma));
  return h;
}

class counter_rng {
public:
  using result_type = std::uint64_t;

  explicit constexpr counter_rng(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return mix64(key_ + (++counter_) * golden_gamma); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  /// Unbiased uniform integer in [0, bound), bound > 0 (Lemire's method).
  std::uint64_t below(std::uint64_t bound) noexcept {
    __uint128_t prod = static_cast<__uint128_t>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        prod = static_cast<__uint128_t>((*this)()) * bound;
        low = static_cast<std::uint64_t>(prod);
      }
    }
    return static_cast<std::uint64_t>(prod >> 64);
  }

  template <class T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i)
      std::swap(items[i - 1], items[below(i)]);
  }

  std::uint64_t counter() const noexcept { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

} // namespace idnc
