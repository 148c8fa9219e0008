#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace sknet {

/// Counter-based splittable generator (SplitMix64 finalizer over key+counter).
/// Every consumer seeds its own instance explicitly; there is no global state,
/// so runs are bit-reproducible for a fixed seed regardless of call order
/// elsewhere in the program.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

  /// Derives an independent stream; child sequences do not overlap the parent.
  Rng split(std::uint64_t label) const {
    return Rng(mix(key_ + 0x632be59bd9b4e019ull * (label + 1)));
  }

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (no stdlib distribution: those are not
  /// bit-stable across library implementations).
  double gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_gaussian_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * 3.14159265358979323846 * u2;
    cached_gaussian_ = r * std::sin(phi);
    has_cached_ = true;
    return r * std::cos(phi);
  }

  std::complex<double> complex_gaussian() { return {gaussian(), gaussian()}; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_gaussian_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace sknet
