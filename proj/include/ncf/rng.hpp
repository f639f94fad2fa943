#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace ncf {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Stream seed for (master, trial, name); independent of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::string_view name) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ splitmix64(trial + 0x632be59bd9b4e019ULL));
  return splitmix64(s ^ fnv1a(name));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }

  // Standard complex normal: E|z|^2 = 1.
  std::complex<double> complex_normal() {
    constexpr double s = 0.70710678118654752440;
    double re = normal_(engine_);
    double im = normal_(engine_);
    return {s * re, s * im};
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  // Uniform integer in [lo, hi].
  long uniform_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace ncf
