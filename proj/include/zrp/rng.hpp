#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace zrp {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform double in (0, 1].
inline double uniform_open0(Rng& rng) { return 1.0 - uniform01(rng); }

inline double exponential(Rng& rng, double rate) { return -std::log(uniform_open0(rng)) / rate; }

// Uniform integer in [0, n) by Lemire's multiply-shift with rejection.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  std::uint64_t x = rng();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = rng();
      m = static_cast<unsigned __int128>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent, reproducible stream keyed by (seed, L, replica).
///
/// The key is hashed through SplitMix64 and expanded with std::seed_seq, so
/// the stream depends only on the key and never on scheduling order.
inline Rng make_stream(std::uint64_t seed, std::uint64_t L, std::uint64_t replica) {
  const std::uint64_t h1 = splitmix64(seed ^ splitmix64(L + 0x632be59bd9b4e019ULL));
  const std::uint64_t h2 = splitmix64(h1 ^ splitmix64(replica + 0x8cb92ba72f3d8dd7ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(h1), static_cast<std::uint32_t>(h1 >> 32),
                    static_cast<std::uint32_t>(h2), static_cast<std::uint32_t>(h2 >> 32)};
  return Rng(seq);
}

}  // namespace zrp
