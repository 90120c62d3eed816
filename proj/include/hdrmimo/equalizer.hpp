#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hdrmimo/frontend.hpp"
#include "hdrmimo/numerics.hpp"

namespace hdrmimo {

struct EqualizerMatrix {
  ComplexMatrix W;  ///< U x B
  double gamma = 1.0;
  double distortion = 0.0;
  double n0 = 0.0;
};

/// Bussgang-linearized LMMSE matrix for the observation r = gamma Omega F H s + d:
///
///   W = (1/gamma) H^H F^H Omega (Omega F H H^H F^H Omega + N0 Omega F F^H Omega
///                                + (2D / gamma^2) I)^{-1}.
///
/// F is applied through its per-cluster reflectors. Since F is unitary the
/// noise-plus-distortion term is the diagonal matrix N0 Omega^2 + (2D/gamma^2) I;
/// when it is positive the inverse is taken through the U x U push-through form
/// (A^H S^{-1} A + I)^{-1} A^H S^{-1}, A = Omega F H. Otherwise the B x B system
/// is solved directly, which fails when it is singular.
EqualizerMatrix build_lmmse(const ComplexMatrix& h_hat, const SpatialTransform& f,
                            const AgcGains& agc, const QuantizerModel& quant, double n0);

/// W = H^H (H H^H + N0 I)^{-1} for unquantized observations.
EqualizerMatrix build_unquantized_lmmse(const ComplexMatrix& h_hat, double n0);

ComplexVector equalize(const EqualizerMatrix& w, const ComplexVector& r);

// --- 16-QAM ----------------------------------------------------------------

/// Gray-mapped square 16-QAM with unit average energy. Bits (b0 b1) select the
/// in-phase level and (b2 b3) the quadrature level:
/// 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3, all divided by sqrt(10).
namespace qam16 {

inline constexpr int kBitsPerSymbol = 4;

/// Bits are 0/1 bytes; length must be a multiple of 4.
ComplexVector modulate(std::span<const std::uint8_t> bits);

/// Nearest-level decision per real dimension followed by inverse Gray mapping.
std::vector<std::uint8_t> slice(const ComplexVector& symbols);

}  // namespace qam16

struct BitErrorCount {
  std::uint64_t errors = 0;
  std::uint64_t total = 0;
};

BitErrorCount count_bit_errors(std::span<const std::uint8_t> tx,
                               std::span<const std::uint8_t> rx);

}  // namespace hdrmimo
