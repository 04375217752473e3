#pragma once

#include <cstdint>

namespace dfd {

/// SplitMix64: a counter-based generator (Weyl sequence plus a mixing
/// finaliser), so every draw is a pure function of seed and counter.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  /// Independent stream derived from this generator's seed.
  Rng split(std::uint64_t stream) const { return Rng(Rng(state_ ^ (stream * 0xD1B54A32D192ED03ULL)).next()); }

private:
  std::uint64_t state_;
};

}  // namespace dfd
