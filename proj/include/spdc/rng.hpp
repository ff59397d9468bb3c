#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace spdc {

// Deterministic random source built on std::mt19937_64 (whose output
// sequence is fixed by the standard). All variate transforms below use
// explicit inversion / Box-Muller so results do not depend on a library's
// distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Exponential waiting time with the given rate (events per unit time).
  double exponential(double rate) {
    return -std::log1p(-uniform()) / rate;
  }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Poisson variate; Knuth multiplication for small means, Gaussian
  // approximation (rounded, clipped at 0) for large ones.
  long long poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 64.0) {
      const double limit = std::exp(-mean);
      long long k = 0;
      double prod = uniform();
      while (prod > limit) {
        ++k;
        prod *= uniform();
      }
      return k;
    }
    const double v = mean + std::sqrt(mean) * normal();
    return v < 0.0 ? 0 : static_cast<long long>(std::llround(v));
  }

  // Independent sub-stream seed for run index i.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace spdc
