#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace cnt {

/// Deterministic RNG used by every stochastic component. All simulation
/// randomness flows through named sub-streams derived from the master seed so
/// results are reproducible regardless of evaluation order.
class Rng {
public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  /// Derives an independent stream from (seed, path). The path identifies the
  /// consumer (field layer index, frame index, noise source tag, ...).
  static Rng derive(uint64_t seed, std::initializer_list<uint64_t> path) {
    uint64_t x = seed;
    for (uint64_t p : path) x = mix(x ^ mix(p));
    return Rng(mix(x));
  }

  uint64_t next() { return eng_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n).
  uint64_t uniform_int(uint64_t n) {
    // Modulo bias is negligible for the n used here (n << 2^64).
    return eng_() % n;
  }

  /// Standard normal deviate (Box-Muller, both uniforms consumed per call).
  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Poisson deviate. Knuth multiplication for small means, Hormann's PTRS
  /// transformed rejection for large means. Deterministic for a given stream.
  int64_t poisson(double lambda) {
    if (!(lambda > 0.0)) return 0;
    if (lambda < 30.0) return poisson_knuth(lambda);
    return poisson_ptrs(lambda);
  }

private:
  static uint64_t mix(uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  int64_t poisson_knuth(double lambda) {
    const double limit = std::exp(-lambda);
    int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  int64_t poisson_ptrs(double lambda) {
    const double b = 0.931 + 2.53 * std::sqrt(lambda);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    const double log_lambda = std::log(lambda);
    for (;;) {
      const double u = uniform() - 0.5;
      const double v = uniform();
      const double us = 0.5 - std::fabs(u);
      const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
      if (us >= 0.07 && v <= vr) return static_cast<int64_t>(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
      const double rhs = kf * log_lambda - lambda - std::lgamma(kf + 1.0);
      if (lhs <= rhs) return static_cast<int64_t>(kf);
    }
  }

  std::mt19937_64 eng_;
};

// Stream tags for Rng::derive.
namespace rng_tag {
constexpr uint64_t kFieldLayer = 0x11;
constexpr uint64_t kFrameNoise = 0x22;
constexpr uint64_t kFixedPattern = 0x33;
constexpr uint64_t kEventNoise = 0x44;
constexpr uint64_t kCondition = 0x55;
}  // namespace rng_tag

}  // namespace cnt
