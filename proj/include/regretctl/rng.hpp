#pragma once

#include <cmath>
#include <cstdint>

namespace regretctl {

// Counter-based generator: every draw is a pure function of (seed, stream, counter),
// so parallel consumers and re-runs see identical values regardless of call order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t bits(std::uint64_t counter) const {
    return mix(mix(mix(seed_) ^ stream_) ^ counter);
  }

  // Uniform on (0, 1]; never returns 0 so it is safe under log().
  double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 1.0) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double uniform(std::uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * (static_cast<double>(bits(counter) >> 11) * 0x1.0p-53);
  }

  // Standard normal via Box-Muller; consumes counters 2k and 2k+1.
  double normal(std::uint64_t counter) const {
    const double u1 = uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Derive an independent stream, e.g. one per replication.
  CounterRng fork(std::uint64_t substream) const {
    return CounterRng(seed_, mix(stream_ ^ mix(substream + 1)));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace regretctl
