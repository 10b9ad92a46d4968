#pragma once

#include <cstdint>

namespace mel {

/// splitmix64 finalizer: a fixed bijective mixing of a 64-bit word.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/* Counter-based generator: every draw is a pure function of
 * (seed, stream, counter), so traces are reproducible across platforms and
 * independent of how work is split across threads. Streams separate uses
 * (e.g. one stream per iteration). */
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() {
    std::uint64_t z = splitmix64(seed_ ^ 0x8BADF00D5DEECE66ULL);
    z = splitmix64(z ^ splitmix64(stream_));
    return splitmix64(z ^ splitmix64(counter_++));
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in {0, ..., n-1}, unbiased via rejection.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~0ULL) / n);
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace mel
