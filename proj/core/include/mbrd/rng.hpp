#pragma once

#include <cstdint>
#include <random>

namespace mbrd {

// splitmix64; used to derive independent seed streams from one run seed.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(split_seed(seed, stream));
}

// Uniform double in [0, 1).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n).
inline int uniform_below(Rng& rng, int n) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

// Sample an index from a discrete distribution given by `probs` (sums to 1).
template <class Vec>
int sample_categorical(Rng& rng, const Vec& probs) {
  double u = uniform01(rng);
  double acc = 0.0;
  int last = static_cast<int>(probs.size()) - 1;
  for (int i = 0; i <= last; ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return last;  // u landed in rounding slack
}

}  // namespace mbrd
