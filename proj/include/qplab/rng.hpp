#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace qplab {

/// Counter-based 64-bit generator (SplitMix64 finalizer over a keyed
/// counter).  State is (seed, stream, counter); jumping to any counter
/// value is O(1), and disjoint streams derived from the same seed are
/// statistically independent.  Monte Carlo drivers assign one stream per
/// path index so that results do not depend on scheduling.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed + 0x9e3779b97f4a7c15ull * (stream + 1)) ^
             mix(stream + 0xbf58476d1ce4e5b9ull)) {}

  std::uint64_t next_u64() { return mix(key_ ^ mix(counter_++)); }

  /// Uniform on [0,1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Marsaglia polar method; exact normal tails, no truncation.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qplab
