#include "hdrmimo/training.hpp"

#include <stdexcept>
#include <string>

namespace hdrmimo {

PilotMatrix generate_pilots(std::size_t users, std::size_t length) {
  if (users == 0 || length < users) {
    throw std::invalid_argument("generate_pilots: need 0 < users <= length (users = " +
                                std::to_string(users) + ", length = " +
                                std::to_string(length) + ")");
  }
  const ComplexMatrix h = hadamard(length);
  return {h.topRows(static_cast<Eigen::Index>(users))};
}

ComplexMatrix simulate_training(const ComplexMatrix& h, const PilotMatrix& pilots,
                                const NoiseModel& noise, Rng& rng) {
  if (h.cols() != pilots.users()) {
    throw std::invalid_argument("simulate_training: dimension mismatch");
  }
  ComplexMatrix y = h * pilots.symbols;
  for (Eigen::Index k = 0; k < y.cols(); ++k)
    for (Eigen::Index b = 0; b < y.rows(); ++b) y(b, k) += complex_normal(rng, noise.n0);
  return y;
}

ComplexMatrix ls_channel_estimate_general(const ComplexMatrix& y_t,
                                         const PilotMatrix& pilots) {
  const ComplexMatrix& s = pilots.symbols;
  if (y_t.cols() != s.cols()) {
    throw std::invalid_argument("ls_channel_estimate: dimension mismatch");
  }
  // H^H = (S S^H)^{-1} S Y_T^H.
  ComplexMatrix x;
  try {
    x = posdef_inverse_apply(HermitianMatrix(ComplexMatrix(s * s.adjoint())),
                             s * y_t.adjoint());
  } catch (const std::domain_error&) {
    throw std::invalid_argument("ls_channel_estimate: pilot matrix is rank deficient");
  }
  return x.adjoint();
}

ComplexMatrix ls_channel_estimate(const ComplexMatrix& y_t, const PilotMatrix& pilots) {
  const ComplexMatrix& s = pilots.symbols;
  if (y_t.cols() != s.cols()) {
    throw std::invalid_argument("ls_channel_estimate: dimension mismatch");
  }
  const auto k = static_cast<double>(s.cols());
  if (s * s.adjoint() == k * ComplexMatrix::Identity(s.rows(), s.rows())) {
    return y_t * s.adjoint() / k;
  }
  return ls_channel_estimate_general(y_t, pilots);
}

HermitianMatrix sample_covariance(const ComplexMatrix& y_t) {
  if (y_t.cols() < 1) throw std::invalid_argument("sample_covariance: K must be >= 1");
  const ComplexMatrix c = y_t * y_t.adjoint() / static_cast<double>(y_t.cols());
  return HermitianMatrix(c);
}

std::vector<HermitianMatrix> sample_covariance_blocks(const ComplexMatrix& y_t,
                                                      int clusters) {
  if (clusters < 1 || y_t.rows() % clusters != 0) {
    throw std::invalid_argument("sample_covariance_blocks: clusters must divide B");
  }
  const Eigen::Index s = y_t.rows() / clusters;
  const double inv_k = 1.0 / static_cast<double>(y_t.cols());
  std::vector<HermitianMatrix> blocks;
  blocks.reserve(clusters);
  for (int c = 0; c < clusters; ++c) {
    const auto rows = y_t.middleRows(c * s, s);
    blocks.emplace_back(ComplexMatrix(rows * rows.adjoint() * inv_k));
  }
  return blocks;
}

Eigen::Index strongest_ue_index(const ComplexMatrix& h_hat) {
  Eigen::Index best = 0;
  double best_norm = -1.0;
  for (Eigen::Index u = 0; u < h_hat.cols(); ++u) {
    const double n = h_hat.col(u).squaredNorm();
    if (n > best_norm) {
      best_norm = n;
      best = u;
    }
  }
  return best;
}

}  // namespace hdrmimo
