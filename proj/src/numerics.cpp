#include "hdrmimo/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

namespace hdrmimo {

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double rel_tol) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("HermitianMatrix: matrix is not square (" +
                                std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ")");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument("HermitianMatrix: non-finite entries");
  }
  const double scale = m.norm();
  const double skew = (m - m.adjoint()).norm();
  if (skew > rel_tol * scale) {
    throw std::invalid_argument("HermitianMatrix: ||A - A^H|| = " +
                                std::to_string(skew) + " exceeds tolerance");
  }
  m_ = (m + m.adjoint()) * 0.5;
}

cdouble complex_sign(cdouble a) {
  const double mag = std::abs(a);
  if (mag == 0.0) return {1.0, 0.0};
  return a / mag;
}

ComplexMatrix householder_matrix(const ComplexVector& v) {
  const double nrm2 = v.squaredNorm();
  if (v.size() == 0 || nrm2 == 0.0) {
    throw std::invalid_argument("householder_matrix: reflector vector is zero");
  }
  ComplexMatrix q = ComplexMatrix::Identity(v.size(), v.size());
  q.noalias() -= (2.0 / nrm2) * v * v.adjoint();
  return q;
}

void householder_apply_inplace(const ComplexVector& v,
                               Eigen::Ref<ComplexMatrix> block) {
  if (block.rows() != v.size()) {
    throw std::invalid_argument("householder_apply: dimension mismatch (" +
                                std::to_string(v.size()) + " vs " +
                                std::to_string(block.rows()) + ")");
  }
  const double nrm2 = v.squaredNorm();
  if (nrm2 == 0.0) {
    throw std::invalid_argument("householder_apply: reflector vector is zero");
  }
  // One inner product per column, then a scaled subtraction of v.
  const Eigen::RowVectorXcd proj = (v.adjoint() * block) * (2.0 / nrm2);
  block.noalias() -= v * proj;
}

ComplexVector householder_apply(const ComplexVector& v, const ComplexVector& x) {
  ComplexMatrix out = x;
  householder_apply_inplace(v, out);
  return out.col(0);
}

EigenPair dominant_eigenpair(const HermitianMatrix& c,
                             const EigenOptions& options) {
  const Eigen::Index m = c.dim();
  if (m == 0) throw std::invalid_argument("dominant_eigenpair: empty matrix");
  const ComplexMatrix& a = c.matrix();
  const double trace = c.trace();

  if (a.cwiseAbs().maxCoeff() == 0.0) {
    return {0.0, ComplexVector::Unit(m, 0)};
  }
  if (!(trace > 0.0)) {
    throw std::invalid_argument(
        "dominant_eigenpair: matrix is not positive semidefinite (trace <= 0)");
  }

  // P = (C / tr C)^(2^kSquarings), renormalized after every squaring.
  constexpr int kSquarings = 6;
  ComplexMatrix p = a / trace;
  for (int i = 0; i < kSquarings; ++i) {
    ComplexMatrix sq = p * p;
    const double t = sq.diagonal().real().sum();
    if (!(t > 0.0)) break;
    p = (sq + sq.adjoint()) * (0.5 / t);
  }

  Eigen::Index start = 0;
  p.colwise().norm().maxCoeff(&start);
  ComplexVector x = p.col(start);
  if (x.norm() == 0.0) x = ComplexVector::Unit(m, start);
  x.normalize();

  const double floor_scale = trace / static_cast<double>(m);
  EigenPair best{0.0, x};
  double best_residual = std::numeric_limits<double>::infinity();

  for (int it = 0; it < options.max_iterations; ++it) {
    const ComplexVector cx = a * x;
    const double lambda = x.dot(cx).real();
    const double residual = (cx - lambda * x).norm();
    if (residual < best_residual) {
      best_residual = residual;
      best = {lambda, x};
    }
    if (residual <= options.tol * std::max(lambda, floor_scale)) {
      return {std::max(lambda, 0.0), x};
    }
    ComplexVector next = p * x;
    const double nrm = next.norm();
    if (nrm == 0.0) break;
    x = next / nrm;
  }
  // Fallback for stalled iterations (tiny spectral gap).
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
  if (solver.info() == Eigen::Success) {
    const ComplexVector v = solver.eigenvectors().col(m - 1).normalized();
    const ComplexVector cv = a * v;
    const double lambda = v.dot(cv).real();
    const double residual = (cv - lambda * v).norm();
    if (residual <= options.tol * std::max(lambda, floor_scale)) {
      return {std::max(lambda, 0.0), v};
    }
    if (residual < best_residual) {
      best_residual = residual;
      best = {lambda, v};
    }
  }
  throw NonConvergenceError("dominant_eigenpair: residual " +
                                std::to_string(best_residual) +
                                " above tolerance after " +
                                std::to_string(options.max_iterations) +
                                " iterations",
                            best, best_residual);
}

ComplexMatrix posdef_inverse_apply(const HermitianMatrix& a,
                                   const ComplexMatrix& rhs) {
  if (rhs.rows() != a.dim()) {
    throw std::invalid_argument("posdef_inverse_apply: dimension mismatch");
  }
  Eigen::LLT<ComplexMatrix> llt(a.matrix());
  if (llt.info() != Eigen::Success) {
    throw std::domain_error(
        "posdef_inverse_apply: matrix is not positive definite");
  }
  const RealVector pivots = ComplexMatrix(llt.matrixL()).diagonal().real();
  const double max_diag = a.matrix().diagonal().real().maxCoeff();
  const double eps = std::numeric_limits<double>::epsilon();
  if (pivots.cwiseAbs2().minCoeff() <=
      static_cast<double>(a.dim()) * eps * max_diag) {
    throw std::domain_error("posdef_inverse_apply: matrix is numerically singular");
  }
  return llt.solve(rhs);
}

bool is_power_of_two(std::size_t k) { return k != 0 && (k & (k - 1)) == 0; }

ComplexMatrix hadamard(std::size_t k) {
  if (!is_power_of_two(k)) {
    throw std::invalid_argument("hadamard: order " + std::to_string(k) +
                                " is not a power of two");
  }
  const auto n = static_cast<Eigen::Index>(k);
  ComplexMatrix h = ComplexMatrix::Ones(1, 1);
  while (h.rows() < n) {
    const Eigen::Index r = h.rows();
    ComplexMatrix next(2 * r, 2 * r);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h;
}

}  // namespace hdrmimo
