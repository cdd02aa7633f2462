#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace mpqc {

// Deterministic PRNG used everywhere in the simulator. Every source of
// randomness in a run (beacon, per-grid measurement streams, adversary
// choices, input sampling) is a separately seeded Rng so that replays and
// cross-backend comparisons consume draws identically.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // SplitMix64 warm-up so nearby seeds diverge immediately.
    next_u64();
    next_u64();
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 bits of entropy.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bit() { return (next_u64() >> 63) != 0; }

  // Uniform in [0, bound) by rejection; bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = ~0ull - (~0ull % bound);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

  double next_gaussian() {
    // Marsaglia polar method; consumes a variable number of draws, so
    // gaussians are only used by the harness input sampler, never by
    // protocol streams that must stay draw-aligned across backends.
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline std::uint64_t hash_str(std::string_view s) {
  // FNV-1a, also used for transcript digests.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

// Derives an independent stream from a master seed and a label/index pair.
inline Rng derive_stream(std::uint64_t master, std::string_view label, std::uint64_t index = 0) {
  std::uint64_t h = hash_str(label);
  h ^= master + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  h ^= index * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull;
  return Rng(h);
}

}  // namespace mpqc
