#pragma once

// Splittable counter-seeded RNG. Streams are derived from a root seed plus
// (chain, purpose) labels via splitmix64 mixing, so every chain and every
// purpose (data generation, initialization, scan order, conditional draws,
// momenta, midpoints, projections) gets an independent, reproducible stream.
// The seed -> output mapping is fixed by this file alone; it does not depend
// on the standard library's distribution implementations.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace glmmc {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream labels. Values are part of the reproducibility contract.
enum class Stream : std::uint64_t {
  Design = 1,
  Response = 2,
  Init = 3,
  ScanOrder = 4,
  Conditional = 5,
  Momentum = 6,
  Midpoint = 7,
  Projection = 8,
  Probe = 9,
  Generic = 10,
};

class Rng {
 public:
  Rng() : Rng(0, 0, Stream::Generic) {}

  Rng(std::uint64_t seed, std::uint64_t chain, Stream purpose) {
    std::uint64_t key = seed;
    std::uint64_t a = splitmix64(key);
    key ^= 0x6a09e667f3bcc909ULL + chain;
    std::uint64_t b = splitmix64(key);
    key ^= 0xbb67ae8584caa73bULL + static_cast<std::uint64_t>(purpose);
    s_[0] = splitmix64(key) ^ a;
    s_[1] = splitmix64(key) ^ b;
    s_[2] = splitmix64(key);
    s_[3] = splitmix64(key) | 1ULL;
  }

  static Rng from_key(std::uint64_t key) {
    Rng r;
    r.s_[0] = splitmix64(key);
    r.s_[1] = splitmix64(key);
    r.s_[2] = splitmix64(key);
    r.s_[3] = splitmix64(key) | 1ULL;
    return r;
  }

  // xoshiro256++
  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform on [0,1) with 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on (0,1); never returns an exact endpoint
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    return r * std::cos(2.0 * std::numbers::pi * uniform());
  }

  // Poisson draw: CDF inversion below rate 10, transformed rejection (PTRS)
  // for larger rates.
  long poisson(double rate) {
    if (rate <= 0.0) return 0;
    if (rate < 10.0) return poisson_inversion(rate);
    return poisson_ptrs(rate);
  }

  std::uint64_t integer(std::uint64_t n) {
    // unbiased bounded integer in [0, n)
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    std::uint64_t l = static_cast<std::uint64_t>(m);
    if (l < n) {
      std::uint64_t t = -n % n;
      while (l < t) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        l = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  long poisson_inversion(double rate) {
    double p = std::exp(-rate);
    double cum = p;
    double u = uniform();
    long k = 0;
    while (u > cum && k < 400) {
      ++k;
      p *= rate / static_cast<double>(k);
      cum += p;
    }
    return k;
  }

  long poisson_ptrs(double rate) {
    // Hormann (1993) PTRS: valid for rate >= 10
    const double b = 0.931 + 2.53 * std::sqrt(rate);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      double u = uniform() - 0.5;
      double v = uniform_open();
      double us = 0.5 - std::abs(u);
      double k = std::floor((2.0 * a / us + b) * u + rate + 0.43);
      if (us >= 0.07 && v <= v_r) return static_cast<long>(k);
      if (k < 0.0 || (us < 0.013 && v > us)) continue;
      if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
          k * std::log(rate) - rate - std::lgamma(k + 1.0)) {
        return static_cast<long>(k);
      }
    }
  }

  std::uint64_t s_[4];
};

}  // namespace glmmc
