#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace fairex {

// All randomness flows through raw mt19937_64 draws.  std::shuffle and the
// distribution templates are implementation-defined, so seeded results would
// not be portable across standard libraries; these helpers are.
using Rng = std::mt19937_64;

// Uniform double in [0, 1), 53 bits of entropy.
inline double draw_unit(Rng& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n).
inline int draw_below(Rng& g, int n) {
  return static_cast<int>(g() % static_cast<std::uint64_t>(n));
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& g) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(g() % i);
    std::swap(v[i - 1], v[j]);
  }
}

inline std::vector<int> permutation(int n, Rng& g) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  shuffle(p, g);
  return p;
}

// Standard Gumbel noise; adding it to log-weights and taking the top element
// samples proportionally to the weights.
inline double draw_gumbel(Rng& g) {
  double u = draw_unit(g);
  if (u <= 0.0) u = 0x1.0p-53;
  return -std::log(-std::log(u));
}

// Decorrelated seed for an indexed substream (splitmix64 finalizer).
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t idx) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (idx + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace fairex
