#pragma once

#include <cstddef>
#include <vector>

#include "hdrmimo/channel.hpp"
#include "hdrmimo/numerics.hpp"
#include "hdrmimo/random.hpp"

namespace hdrmimo {

/// U x K pilot matrix with +-1 entries and orthogonal rows.
struct PilotMatrix {
  ComplexMatrix symbols;
  Eigen::Index length() const { return symbols.cols(); }
  Eigen::Index users() const { return symbols.rows(); }
};

/// First `users` rows of the order-`length` Hadamard matrix.
PilotMatrix generate_pilots(std::size_t users, std::size_t length);

/// Y_T = H S_T + N_T. Training observations are unquantized.
ComplexMatrix simulate_training(const ComplexMatrix& h, const PilotMatrix& pilots,
                                const NoiseModel& noise, Rng& rng);

/// General least-squares estimate Y_T S^H (S S^H)^{-1}; takes the (1/K) Y_T S^H
/// shortcut when S S^H is exactly K I.
ComplexMatrix ls_channel_estimate(const ComplexMatrix& y_t, const PilotMatrix& pilots);

/// Least-squares estimate through a Hermitian solve, without the shortcut.
ComplexMatrix ls_channel_estimate_general(const ComplexMatrix& y_t,
                                          const PilotMatrix& pilots);

/// (1/K) Y_T Y_T^H.
HermitianMatrix sample_covariance(const ComplexMatrix& y_t);

/// Diagonal blocks of the sample covariance, one S x S block per cluster.
/// Equal to the corresponding blocks of sample_covariance(y_t).
std::vector<HermitianMatrix> sample_covariance_blocks(const ComplexMatrix& y_t,
                                                      int clusters);

/// argmax_u ||h_u||, lowest index on ties.
Eigen::Index strongest_ue_index(const ComplexMatrix& h_hat);

struct TrainingOutput {
  ComplexMatrix y_t;
  ComplexMatrix h_hat;
  std::vector<HermitianMatrix> covariance_blocks;
  Eigen::Index strong_hat = 0;
  ComplexVector h_strong_hat;
};

}  // namespace hdrmimo
