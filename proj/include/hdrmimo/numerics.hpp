#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>

#include <Eigen/Dense>

namespace hdrmimo {

using cdouble = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Square complex matrix that was checked to equal its conjugate transpose.
///
/// Construction validates ||A - A^H||_F <= rel_tol * ||A||_F and then stores
/// the exactly Hermitian part (A + A^H) / 2.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m, double rel_tol = 1e-12);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double trace() const { return m_.diagonal().real().sum(); }

 private:
  ComplexMatrix m_;
};

struct EigenPair {
  double value = 0.0;
  ComplexVector vector;
};

/// Thrown by dominant_eigenpair when the residual bound is not met within the
/// iteration cap. Carries the iterate with the smallest residual seen.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, EigenPair best, double residual)
      : std::runtime_error(what), best_(std::move(best)), residual_(residual) {}

  const EigenPair& best() const { return best_; }
  double residual() const { return residual_; }

 private:
  EigenPair best_;
  double residual_;
};

/// a / |a|, with sign(0) = 1.
cdouble complex_sign(cdouble a);

/// Dense reflector I - 2 v v^H / ||v||^2.
ComplexMatrix householder_matrix(const ComplexVector& v);

/// x - 2 v (v^H x) / ||v||^2 without forming the matrix.
ComplexVector householder_apply(const ComplexVector& v, const ComplexVector& x);

/// In-place reflection of every column of `block`. Rows of `block` must match
/// the length of `v`.
void householder_apply_inplace(const ComplexVector& v,
                               Eigen::Ref<ComplexMatrix> block);

struct EigenOptions {
  double tol = 1e-10;
  int max_iterations = 1000;
};

/// Largest eigenvalue of a Hermitian PSD matrix and a unit eigenvector.
///
/// The matrix is first normalized and squared repeatedly so that the
/// eigenvalue ratio lambda_2 / lambda_1 is raised to a high power, then power
/// iteration runs on the squared operator. Convergence is declared when
/// ||C l - lambda l|| <= tol * max(lambda, trace(C) / M) holds for the
/// original C. Near-degenerate leading pairs can stall power iteration; if
/// the iteration cap is reached, a full Hermitian decomposition is tried
/// before NonConvergenceError is thrown.
EigenPair dominant_eigenpair(const HermitianMatrix& c,
                             const EigenOptions& options = {});

/// Solves A X = rhs for Hermitian positive definite A. Throws
/// std::domain_error when the factorization fails or A is numerically
/// singular.
ComplexMatrix posdef_inverse_apply(const HermitianMatrix& a,
                                   const ComplexMatrix& rhs);

/// Sylvester-construction Hadamard matrix of order k (power of two).
ComplexMatrix hadamard(std::size_t k);

bool is_power_of_two(std::size_t k);

}  // namespace hdrmimo
