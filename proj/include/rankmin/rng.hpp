#pragma once

#include <cstdint>
#include <random>

namespace rankmin {

// splitmix64 step; also the documented derivation of per-instance seeds from a
// master seed: seed_i = splitmix64(master ^ splitmix64(i + 1)).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 1));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(splitmix64(seed));
}

}  // namespace rankmin
