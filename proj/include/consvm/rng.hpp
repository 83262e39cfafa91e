#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace consvm {

// Splittable 64-bit counter-based generator (splitmix64 output function).
// All randomized behavior in the library goes through this class so that
// results are bit-reproducible across platforms and standard-library
// implementations; std::shuffle / std::normal_distribution are not.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Independent child stream for lane `stream` (trial index, slave index,
  // ...). Pure function of (state, stream): parent state is not advanced.
  SplitMix64 split(std::uint64_t stream) const {
    return SplitMix64(mix(state_ ^ (0x9e3779b97f4a7c15ull * (stream + 1))));
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound); unbiased via threshold rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Standard normal via Box-Muller; consumes exactly two draws per pair.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// In-place Fisher-Yates shuffle driven by SplitMix64.
template <typename T>
void fisher_yates_shuffle(std::vector<T>& values, SplitMix64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace consvm
