#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace esd {

// One splitmix64 round; the standard constants.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic child-seed derivation: hash the master seed, then fold each
// component in with one more round. Every sampling site in the library gets
// its seed through this function, so reruns and concurrency reorderings can
// never change results. The exact chain is documented in the README.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = splitmix64(master);
  for (std::uint64_t p : parts) s = splitmix64(s ^ p);
  return s;
}

// 53-bit uniform in [0, 1). std::uniform_real_distribution is not pinned down
// by the standard, so draws go through this helper to keep sequences identical
// across standard-library implementations.
inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

}  // namespace esd
