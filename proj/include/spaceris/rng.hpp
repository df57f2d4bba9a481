#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace spaceris {

/// Deterministic xoshiro256++ stream with splitmix64 seeding.
///
/// Every stochastic component in the simulator draws from one of these;
/// substreams are derived with split() so that parallel consumers (per-link,
/// per-episode, per-whale) stay reproducible independent of scheduling.
/// No libstdc++ distributions are used: the sampling algorithms below are
/// part of the output contract (byte-identical CSVs across builds).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  /// Derive an independent substream; `tag` distinguishes siblings.
  Rng split(std::uint64_t tag) const {
    std::uint64_t x = state_[0] ^ (0x9e3779b97f4a7c15ULL + tag);
    std::uint64_t y = state_[2] ^ (tag * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL);
    Rng child(0);
    std::uint64_t mix = x;
    child.state_[0] = splitmix64(mix);
    mix ^= y;
    child.state_[1] = splitmix64(mix);
    child.state_[2] = splitmix64(mix);
    child.state_[3] = splitmix64(mix);
    return child;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    // Rejection to kill modulo bias.
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return static_cast<int>(v % bound);
  }

  /// Standard normal via Box-Muller (both uniforms consumed every call).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Poisson count, Knuth product method (fine for the desk-scale rates here).
  int poisson(double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("poisson: negative rate");
    if (lambda == 0.0) return 0;
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::uint64_t state_[4];
};

}  // namespace spaceris
