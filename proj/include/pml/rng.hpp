#ifndef PML_RNG_HPP
#define PML_RNG_HPP

#include <cmath>
#include <cstdint>

namespace pml {

/// Small deterministic generator (splitmix64). Used instead of the standard
/// distributions so that seeded runs are byte-identical across platforms and
/// standard-library versions.
class SplitMix64Rng {
 public:
  explicit SplitMix64Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1).
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = uniform_open();
    const double v = uniform_open();
    const double r = std::sqrt(-2.0 * std::log(u));
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(kTwoPi * v);
    have_spare_ = true;
    return r * std::cos(kTwoPi * v);
  }

  /// Zero-mean Laplace with scale b via inverse CDF.
  double laplace(double b) {
    const double u = uniform_open() - 0.5;
    return (u < 0.0 ? b : -b) * std::log1p(-2.0 * std::abs(u));
  }

  /// Derive an independent stream for (seed, index) pairs; evaluation-order
  /// independent parallel audits rely on this.
  static SplitMix64Rng substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64Rng mixer(seed ^ (0x6a09e667f3bcc909ull + index));
    mixer.next_u64();
    return SplitMix64Rng(mixer.next_u64());
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace pml

#endif  // PML_RNG_HPP
