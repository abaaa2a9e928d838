#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "rational.hpp"

namespace codesparse {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Child seed for a named branch; FNV-1a on the tag, then mixed with the parent.
inline std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : tag) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return splitmix64(parent ^ splitmix64(h));
}

inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  return splitmix64(parent ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// SplitMix64 stream. Same seed gives the same sequence on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
      std::uint64_t x = next();
      unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
      if (static_cast<std::uint64_t>(m) >= limit) return static_cast<std::uint64_t>(m >> 64);
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Bernoulli(p) with p resolved to 2^-64.
  bool bernoulli(const Rational& p) {
    if (p >= 1) return true;
    if (p <= 0) return false;
    BigInt threshold = numerator_of(p) * (BigInt(1) << 64) / denominator_of(p);
    return BigInt(next()) < threshold;
  }

  /// Binomial(m, 1/s) for integer s >= 1. Small m is drawn exactly; large m uses
  /// geometric skips in double precision.
  std::uint64_t binomial_inverse(std::uint64_t m, std::uint64_t s) {
    if (s <= 1) return m;
    if (m <= 64) {
      std::uint64_t k = 0;
      for (std::uint64_t i = 0; i < m; ++i) k += below(s) == 0 ? 1 : 0;
      return k;
    }
    const double log_q = std::log1p(-1.0 / static_cast<double>(s));
    std::uint64_t k = 0;
    std::uint64_t pos = 0;
    for (;;) {
      double u = 1.0 - unit();  // (0, 1]
      double skip = std::floor(std::log(u) / log_q);
      if (skip >= static_cast<double>(m - pos)) break;
      pos += static_cast<std::uint64_t>(skip) + 1;
      ++k;
      if (pos >= m) break;
    }
    return k;
  }

 private:
  std::uint64_t state_;
};

}  // namespace codesparse
