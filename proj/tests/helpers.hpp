#pragma once

#include <algorithm>
#include <complex>
#include <random>

namespace testutil {

inline double rel_diff(std::complex<double> a, std::complex<double> b, double floor = 1e-12) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// Deterministic generator; every randomized test fixes its own seed.
inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(gen);
}

inline int uniform_int(std::mt19937_64& gen, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(gen);
}

}  // namespace testutil
