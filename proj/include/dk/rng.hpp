#pragma once

#include <cmath>
#include <cstdint>

namespace dk {

// Counter-based RNG built on the splitmix64 finalizer. Every draw is a pure
// function of its key, so sampling is reproducible regardless of iteration
// order or thread scheduling.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ b);
}

inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return splitmix64(mix_key(a, b) ^ c);
}

// Uniform in [0, 1), 53-bit resolution.
inline double uniform01(std::uint64_t key) {
  return static_cast<double>(splitmix64(key) >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller; consumes two derived uniforms.
inline double gaussian(std::uint64_t key) {
  double u1 = uniform01(mix_key(key, 0x1ULL));
  double u2 = uniform01(mix_key(key, 0x2ULL));
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

// Sequential counter stream over one base key.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return splitmix64(mix_key(key_, counter_++)); }
  double next_uniform() { return uniform01(mix_key(key_, counter_++)); }
  double next_gaussian() { return gaussian(mix_key(key_, counter_++)); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dk
