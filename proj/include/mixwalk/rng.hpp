#pragma once
#include <cstdint>

namespace mixwalk {

// Deterministic 64-bit generator (splitmix64 scrambler). All randomness in
// the library flows through instances of this type; parallel code derives one
// substream per work item with Rng::stream(seed, index), so results never
// depend on thread count or scheduling.
struct Rng {
  std::uint64_t state = 0;

  Rng() = default;
  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // unbiased integer in [0, n), n >= 1
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t reject = (0ull - n) % n;  // 2^64 mod n
    std::uint64_t x;
    do {
      x = next();
    } while (x < reject);
    return x % n;
  }

  // uniform double in [0, 1), 53 random bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // substream for work item `index`; the raw seed is scrambled first so
  // that nearby seeds do not collide with nearby indices
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    Rng h(seed);
    std::uint64_t a = h.next();
    Rng g(a ^ (index * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull));
    g.next();
    return g;
  }
};

}  // namespace mixwalk
