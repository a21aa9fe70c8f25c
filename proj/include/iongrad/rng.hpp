#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace iongrad {

// Deterministic random stream. mt19937_64 is fully specified by the standard;
// the uniform and gaussian mappings are hand-rolled here because the standard
// library distributions are implementation-defined and would break
// bit-reproducible outputs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; caches the second deviate.
  double gaussian() {
    if (have_cache_) {
      have_cache_ = false;
      return cache_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.28318530717958647692 * u2;
    cache_ = r * std::sin(a);
    have_cache_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double cache_ = 0.0;
  bool have_cache_ = false;
};

}  // namespace iongrad
