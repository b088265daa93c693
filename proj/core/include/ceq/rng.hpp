// Splittable counter-keyed RNG streams. Every (seed, path, stream) triple
// maps to an independent xoshiro256++ state via SplitMix64, so draws are
// reproducible regardless of execution order or worker count.
#pragma once

#include <cstdint>
#include <cmath>

namespace ceq {

inline uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Xoshiro256 {
 public:
  using result_type = uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ULL; }

  explicit Xoshiro256(uint64_t seed) {
    uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
  }

  result_type operator()() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double uniform() {  // (0, 1), never exactly 0
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Box-Muller without spare caching: stream state stays position-independent.
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  double exponential(double rate) {
    return -std::log(uniform()) / rate;
  }

 private:
  static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
  uint64_t s_[4];
};

// Deterministic stream key: mixes (seed, path, stream) with distinct rounds.
inline Xoshiro256 make_stream(uint64_t seed, uint64_t path, uint64_t stream) {
  uint64_t x = seed;
  uint64_t a = splitmix64(x);
  x ^= path * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL;
  uint64_t b = splitmix64(x);
  x ^= stream * 0xda942042e4dd58b5ULL + 0x2545f491ULL;
  uint64_t c = splitmix64(x);
  return Xoshiro256(a ^ (b * 0xff51afd7ed558ccdULL) ^ (c << 1));
}

}  // namespace ceq
