#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "hdrmimo/numerics.hpp"

namespace hdrmimo {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the substream owned by one (method, sweep point, realization) work
/// unit: the components are folded in order through SplitMix64,
///   h0 = splitmix64(master), h_{i+1} = splitmix64(h_i ^ component_i).
constexpr std::uint64_t derive_stream_seed(std::uint64_t master,
                                           std::uint64_t method_index,
                                           std::uint64_t point_index,
                                           std::uint64_t realization_index) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ method_index);
  h = splitmix64(h ^ point_index);
  h = splitmix64(h ^ realization_index);
  return h;
}

/// Circularly-symmetric complex Gaussian; `variance` is split equally across
/// the real and imaginary parts.
inline cdouble complex_normal(Rng& rng, double variance) {
  std::normal_distribution<double> n;
  const double scale = std::sqrt(variance / 2.0);
  const double re = n(rng);
  const double im = n(rng);
  return {scale * re, scale * im};
}

inline ComplexMatrix complex_normal_matrix(Rng& rng, Eigen::Index rows,
                                           Eigen::Index cols, double variance) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_normal(rng, variance);
  return m;
}

}  // namespace hdrmimo
