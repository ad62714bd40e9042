#pragma once
#include <cmath>
#include <cstdint>

namespace lklab {

// Counter-based generator: every draw is a pure function of (seed, stream,
// counter), so runs are reproducible regardless of evaluation order and
// parallel jobs can carve out independent streams.
struct CounterRng {
  std::uint64_t seed = 42;
  std::uint64_t stream = 0;

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t bits(std::uint64_t counter) const {
    std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc908ULL);
    h = splitmix64(h ^ stream);
    return splitmix64(h ^ counter);
  }

  // uniform in [0, 1), 53-bit resolution
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // standard normal via Box-Muller; consumes counters 2i and 2i+1.
  // Implemented here (rather than std::normal_distribution) so the byte
  // stream is pinned down by this file alone.
  double normal(std::uint64_t i) const {
    double u1 = uniform(2 * i);
    double u2 = uniform(2 * i + 1);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  CounterRng fork(std::uint64_t substream) const {
    return CounterRng{seed, splitmix64(stream ^ (substream + 0x9e3779b97f4a7c15ULL))};
  }
};

}  // namespace lklab
