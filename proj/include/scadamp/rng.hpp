#pragma once

#include <cmath>
#include <cstdint>

namespace scadamp {

// PCG32 (O'Neill's pcg32_random_r) with an explicitly coded Box-Muller
// transform.  The point of rolling our own instead of <random> is bit
// reproducibility: std::normal_distribution is implementation-defined, so
// seeds would not reproduce instances across standard libraries.

class Pcg32 {
 public:
  explicit Pcg32(std::uint64_t seed, std::uint64_t seq = 0xda3e39cb94b95bdbULL) {
    state_ = 0u;
    inc_ = (seq << 1u) | 1u;
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    std::uint32_t xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
  }

  std::uint64_t next_u64() {
    std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform on the open interval (0, 1): (k + 0.5) / 2^53 with k < 2^53.
  double next_double() {
    std::uint64_t k = next_u64() >> 11;
    return (static_cast<double>(k) + 0.5) * (1.0 / 9007199254740992.0);
  }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

// Standard-normal stream via Box-Muller; both variates of each pair are
// consumed so the draw sequence is a pure function of the seed.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  Pcg32& engine() { return rng_; }

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = rng_.next_double();
    double u2 = rng_.next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double c = std::cos(6.283185307179586476925286766559 * u2);
    double s = std::sin(6.283185307179586476925286766559 * u2);
    spare_ = r * s;
    have_spare_ = true;
    return r * c;
  }

 private:
  Pcg32 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// splitmix64, used to derive independent per-task seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t k) {
  std::uint64_t z = base + (k + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace scadamp
