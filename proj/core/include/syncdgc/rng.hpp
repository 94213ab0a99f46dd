#pragma once

#include <cstdint>

namespace syncdgc {

// SplitMix64 (Vigna, public domain). Used to expand seeds and to derive
// child-stream seeds; documented so runs are reproducible across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t s_;
};

// xoshiro256** 1.0 (Blackman & Vigna, public domain), state seeded with
// SplitMix64. Identical seeds give bitwise-identical sequences everywhere;
// no libstdc++ distribution machinery is used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1), 53 mantissa bits.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n) via 128-bit multiply-shift.
  std::uint64_t index(std::uint64_t n) {
    return std::uint64_t((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

// The i-th child seed of `base` is the i-th output (0-indexed) of a
// SplitMix64 stream seeded with `base`. Training stages draw from fixed
// child streams; seed sweeps use consecutive children as run seeds.
inline std::uint64_t child_seed(std::uint64_t base, int stream) {
  SplitMix64 sm(base);
  std::uint64_t s = 0;
  for (int i = 0; i <= stream; ++i) s = sm.next();
  return s;
}

// Fixed child-stream ids used by the pipeline.
enum SeedStream : int {
  kSeedParamInit = 0,  // weight initialization
  kSeedKmeans = 1,     // center initialization
  kSeedRefine = 2,     // Bernoulli edge sampling
};

}  // namespace syncdgc
