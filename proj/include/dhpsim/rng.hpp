#pragma once

#include <cmath>
#include <cstdint>

namespace dhps {

// splitmix64, used for seeding and deriving independent streams
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t salt) {
  uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
  uint64_t a = splitmix64(s);
  return a ^ splitmix64(s);
}

// xoshiro256**. Every random draw in the simulator flows through this
// generator, so a run is bit-exact replayable from its seeds on any platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform integer in [0, n), Lemire's multiply-shift rejection
  uint32_t below(uint32_t n) {
    uint64_t m = (uint64_t)(uint32_t)next() * n;
    auto lo = (uint32_t)m;
    if (lo < n) {
      const uint32_t threshold = (uint32_t)(0u - n) % n;
      while (lo < threshold) {
        m = (uint64_t)(uint32_t)next() * n;
        lo = (uint32_t)m;
      }
    }
    return (uint32_t)(m >> 32);
  }

  // uniform integer in [lo, hi], inclusive
  uint32_t between(uint32_t lo, uint32_t hi) { return lo + below(hi - lo + 1); }

  double unit() { return (double)(next() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

  // Knuth's product method; fine for the small means used here
  uint32_t poisson(double mean) {
    if (mean <= 0) return 0;
    const double limit = std::exp(-mean);
    uint32_t k = 0;
    double prod = unit();
    while (prod > limit) {
      ++k;
      prod *= unit();
    }
    return k;
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

}  // namespace dhps
