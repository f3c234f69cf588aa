// SPDX-License-Identifier: Apache-2.0
//
// Deterministic randomness. std::mt19937_64 is fully specified by the
// standard, so identical seeds give identical streams on every platform; the
// variate transforms below are written out explicitly because the standard
// distribution objects are implementation-defined and would break the
// bit-reproducibility contract.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "cdma/linalg.hpp"

namespace cdma {

/// 64-bit finalizer (splitmix64). Used to derive independent per-trial seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Uniform on [0, 1), 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1): both endpoints excluded.
inline double uniform_open01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Rayleigh variate with scale σ (mean σ√(π/2)), via inverse CDF.
inline double rayleigh(std::mt19937_64& rng, double sigma) {
  return sigma * std::sqrt(-2.0 * std::log(uniform_open01(rng)));
}

/// N×K matrix with i.i.d. equiprobable ±1/√N entries (unit-norm columns).
inline Mat random_sign_codes(std::mt19937_64& rng, int n, int k) {
  const double chip = 1.0 / std::sqrt(static_cast<double>(n));
  Mat codes(static_cast<std::size_t>(n), static_cast<std::size_t>(k));
  for (std::size_t c = 0; c < codes.cols(); ++c)
    for (std::size_t r = 0; r < codes.rows(); ++r)
      codes(r, c) = (rng() >> 63) ? chip : -chip;
  return codes;
}

}  // namespace cdma
