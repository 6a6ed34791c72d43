#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace surprise {

/// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = mix64(master ^ 0x6a09e667f3bcc909ULL);
  s = mix64(s ^ a);
  s = mix64(s ^ b);
  return mix64(s ^ c);
}

/// Stream purposes, kept distinct so reordering work never aliases streams.
namespace stream {
constexpr std::uint64_t kPilot = 1;
constexpr std::uint64_t kDraw = 2;
constexpr std::uint64_t kGenerate = 3;
constexpr std::uint64_t kOracle = 4;
constexpr std::uint64_t kBootstrap = 5;
constexpr std::uint64_t kTest = 6;
}  // namespace stream

/**
 * Deterministic random stream. Wraps mt19937_64 but produces all variates
 * through explicit algorithms, so results are reproducible independent of
 * the standard library's distribution implementations.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0,1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0,1]; safe for log().
  double uniform01_open() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Standard normal via Box-Muller; the spare deviate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01_open();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Poisson draw; Knuth multiplication for small means, normal
  /// approximation above the cutoff (never reached in the shipped studies).
  long poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    if (lambda < 64.0) {
      const double threshold = std::exp(-lambda);
      long k = 0;
      double prod = uniform01_open();
      while (prod > threshold) {
        ++k;
        prod *= uniform01_open();
      }
      return k;
    }
    const double x = lambda + std::sqrt(lambda) * normal();
    return x < 0.0 ? 0 : static_cast<long>(std::floor(x + 0.5));
  }

  /// Independent stream derived from this stream's seed (not its state).
  Rng substream(std::uint64_t tag, std::uint64_t idx = 0) const {
    return Rng(derive_seed(seed_, tag, idx));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace surprise
