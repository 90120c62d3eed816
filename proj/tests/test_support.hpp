#pragma once

// Random instance generators and independent oracles shared by the test
// binaries. Nothing here calls into the code paths it is used to check.

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "hdrmimo/numerics.hpp"
#include "hdrmimo/random.hpp"

namespace hdrmimo::testing {

inline ComplexVector random_vector(Rng& rng, Eigen::Index m) {
  ComplexVector v(m);
  for (Eigen::Index i = 0; i < m; ++i) v(i) = complex_normal(rng, 1.0);
  return v;
}

inline ComplexMatrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  return complex_normal_matrix(rng, rows, cols, 1.0);
}

/// A A^H with A of size m x rank.
inline ComplexMatrix random_psd(Rng& rng, Eigen::Index m, Eigen::Index rank) {
  const ComplexMatrix a = random_matrix(rng, m, rank);
  ComplexMatrix c = a * a.adjoint();
  return (c + c.adjoint()) * 0.5;
}

/// Largest eigenvalue from a full Hermitian eigendecomposition.
inline double full_decomposition_lambda_max(const ComplexMatrix& c) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(c, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

inline double full_decomposition_lambda_min(const ComplexMatrix& c) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(c, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Dense reflector written out entry by entry: delta_ij - 2 v_i conj(v_j) / ||v||^2.
inline ComplexMatrix dense_reflector(const ComplexVector& v) {
  const Eigen::Index m = v.size();
  double nrm2 = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) nrm2 += std::norm(v(i));
  ComplexMatrix q(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      q(i, j) = (i == j ? 1.0 : 0.0) - 2.0 * v(i) * std::conj(v(j)) / nrm2;
  return q;
}

inline double rel_err(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

}  // namespace hdrmimo::testing
