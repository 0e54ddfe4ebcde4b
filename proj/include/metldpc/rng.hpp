#pragma once

// Counter-keyed pseudo-random stream. Each (seed, stream) pair yields an
// independent deterministic sequence, so parallel sampling is reproducible
// regardless of how streams are assigned to threads.

#include <cstdint>

namespace metldpc {

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : state_(scramble(seed + 0x9e3779b97f4a7c15ull * (stream + 1))) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    return scramble(state_);
  }

  // Unbiased draw from [0, n) via multiply-shift rejection.
  std::uint64_t bounded(std::uint64_t n) {
    std::uint64_t x = next();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    std::uint64_t l = static_cast<std::uint64_t>(m);
    if (l < n) {
      std::uint64_t t = (0 - n) % n;
      while (l < t) {
        x = next();
        m = static_cast<unsigned __int128>(x) * n;
        l = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  double uniform01() { return (next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t scramble(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace metldpc
