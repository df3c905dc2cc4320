#pragma once

#include <cstdint>
#include <random>

namespace lrswap {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for trial `index` under a master seed.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

inline Rng trial_rng(std::uint64_t master, std::uint64_t index) { return Rng(trial_seed(master, index)); }

}  // namespace lrswap
