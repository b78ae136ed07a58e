#pragma once

#include <cstdint>

#include "calibre/math.hpp"

namespace calibre::rng {

// Generator identity. Bump the version if the stream derivation, the
// uniform mapping or the normal transform ever changes: seeds promise
// bit-identical output across runs and platforms.
inline constexpr const char* kGeneratorId = "splitmix64-streams/v1";

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Substream domains keep draws for unrelated purposes decorrelated even
// when they share a seed and an index.
inline constexpr std::uint64_t kDomainSynthetic = 1;
inline constexpr std::uint64_t kDomainCauchy = 2;
inline constexpr std::uint64_t kDomainSplit = 3;
inline constexpr std::uint64_t kDomainTest = 100;

// Counter-style substream addressed by (seed, domain, index).
// Streams with distinct addresses are independent for simulation use;
// one stream per record makes generation order-free and parallelizable.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t domain, std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64_next(s);
    s = h ^ (domain * 0xd6e8feb86659fd93ULL);
    h = splitmix64_next(s);
    state_ = h ^ (index * 0xca01f9dd51b143b1ULL);
  }

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  // Uniform on [0,1), 53-bit resolution.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0,1); safe to feed into quantile functions.
  double next_open_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  // Uniform integer in [0, bound), rejection-sampled to avoid modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Standard normal by the inverse-CDF method (AS 241); exact function of
  // the underlying bits, hence reproducible everywhere.
  double next_normal() { return normal_quantile(next_open_unit()); }

 private:
  std::uint64_t state_;
};

}  // namespace calibre::rng
