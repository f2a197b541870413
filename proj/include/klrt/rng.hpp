#pragma once

#include <cmath>
#include <cstdint>

namespace klrt {

namespace detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL);
  return splitmix64_next(s);
}

}  // namespace detail

// Counter-based random stream: the state is a pure function of (seed,
// stream_id), so stream r of a run is identical no matter which thread draws
// it or in what order streams are created. Same inputs give the same
// sequence on every platform.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id)
      : state_(detail::mix_key(detail::mix_key(seed, 0x8e9c5f3dull), stream_id)) {}

  std::uint64_t next_u64() { return detail::splitmix64_next(state_); }

  // Uniform on [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1): offset by half an ulp so log() never sees 0.
  double next_open_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // +1 or -1 with equal probability.
  double next_rademacher() { return (next_u64() & 1u) ? 1.0 : -1.0; }

  // Exp(1); strictly positive.
  double next_exponential() { return -std::log(next_open_double()); }

  // Standard normal via Box-Muller, caching the second deviate.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double two_pi = 6.283185307179586476925286766559;
    double r = std::sqrt(-2.0 * std::log(next_open_double()));
    double a = two_pi * next_double();
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Key derivation for nested deterministic streams (replicate r of repetition
// k of a seeded campaign, and so on).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return detail::mix_key(detail::mix_key(seed, a), b);
}

}  // namespace klrt
