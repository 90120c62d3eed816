#include "hdrmimo/equalizer.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace hdrmimo {

EqualizerMatrix build_lmmse(const ComplexMatrix& h_hat, const SpatialTransform& f,
                            const AgcGains& agc, const QuantizerModel& quant, double n0) {
  const Eigen::Index b = h_hat.rows();
  if (f.antennas() != b || agc.omega.size() != b) {
    throw std::invalid_argument("build_lmmse: dimension mismatch");
  }
  if (!(quant.gamma > 0.0)) throw std::invalid_argument("build_lmmse: gamma must be positive");

  ComplexMatrix a = h_hat;
  f.apply_inplace(a);
  a = agc.omega.asDiagonal() * a;

  const RealVector sigma =
      (n0 * agc.omega.array().square() + 2.0 * quant.distortion / (quant.gamma * quant.gamma))
          .matrix();

  ComplexMatrix w;
  if (sigma.minCoeff() > 0.0) {
    const ComplexMatrix rhs = a.adjoint() * sigma.cwiseInverse().asDiagonal();  // A^H S^{-1}
    ComplexMatrix gram = rhs * a;
    gram.diagonal().array() += 1.0;
    w = posdef_inverse_apply(HermitianMatrix(gram, 1e-10), rhs) / quant.gamma;
  } else {
    ComplexMatrix inner = a * a.adjoint();
    inner.diagonal() += sigma.cast<cdouble>();
    w = posdef_inverse_apply(HermitianMatrix(inner, 1e-10), a).adjoint() / quant.gamma;
  }
  return {std::move(w), quant.gamma, quant.distortion, n0};
}

EqualizerMatrix build_unquantized_lmmse(const ComplexMatrix& h_hat, double n0) {
  // H^H (H H^H + N0 I)^{-1} = (H^H H + N0 I)^{-1} H^H.
  ComplexMatrix gram = h_hat.adjoint() * h_hat;
  gram.diagonal().array() += n0;
  ComplexMatrix w = posdef_inverse_apply(HermitianMatrix(gram, 1e-10), h_hat.adjoint());
  return {std::move(w), 1.0, 0.0, n0};
}

ComplexVector equalize(const EqualizerMatrix& w, const ComplexVector& r) {
  if (w.W.cols() != r.size()) throw std::invalid_argument("equalize: dimension mismatch");
  return w.W * r;
}

namespace qam16 {
namespace {

const double kScale = 1.0 / std::sqrt(10.0);

// Gray pair (b_hi b_lo) -> level index into {-3, -1, +1, +3}.
constexpr std::array<double, 4> kLevelOfPair = {-3.0, -1.0, +3.0, +1.0};  // 00,01,10,11

double level(std::uint8_t hi, std::uint8_t lo) { return kLevelOfPair[(hi << 1) | lo]; }

// Nearest level in {-3,-1,1,3} (unscaled) and its Gray bits.
void decide(double x, std::uint8_t& hi, std::uint8_t& lo) {
  if (x < -2.0) {
    hi = 0, lo = 0;
  } else if (x < 0.0) {
    hi = 0, lo = 1;
  } else if (x < 2.0) {
    hi = 1, lo = 1;
  } else {
    hi = 1, lo = 0;
  }
}

}  // namespace

ComplexVector modulate(std::span<const std::uint8_t> bits) {
  if (bits.size() % kBitsPerSymbol != 0) {
    throw std::invalid_argument("qam16::modulate: bit count is not a multiple of 4");
  }
  ComplexVector s(static_cast<Eigen::Index>(bits.size() / kBitsPerSymbol));
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const auto* b = bits.data() + kBitsPerSymbol * i;
    s(i) = cdouble(level(b[0], b[1]), level(b[2], b[3])) * kScale;
  }
  return s;
}

std::vector<std::uint8_t> slice(const ComplexVector& symbols) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(symbols.size()) * kBitsPerSymbol);
  for (Eigen::Index i = 0; i < symbols.size(); ++i) {
    auto* b = bits.data() + kBitsPerSymbol * i;
    decide(symbols(i).real() / kScale, b[0], b[1]);
    decide(symbols(i).imag() / kScale, b[2], b[3]);
  }
  return bits;
}

}  // namespace qam16

BitErrorCount count_bit_errors(std::span<const std::uint8_t> tx,
                               std::span<const std::uint8_t> rx) {
  if (tx.size() != rx.size()) {
    throw std::invalid_argument("count_bit_errors: length mismatch");
  }
  BitErrorCount out{0, tx.size()};
  for (std::size_t i = 0; i < tx.size(); ++i) out.errors += (tx[i] != rx[i]) ? 1 : 0;
  return out;
}

}  // namespace hdrmimo
