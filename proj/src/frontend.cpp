#include "hdrmimo/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/tools/minima.hpp>

namespace hdrmimo {

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::identity: return "identity";
    case TransformKind::hr_iso: return "hr-iso";
    case TransformKind::hr_max: return "hr-max";
  }
  return "unknown";
}

SpatialTransform::SpatialTransform(TransformKind kind, int antennas,
                                   std::vector<std::optional<ComplexVector>> reflectors)
    : kind_(kind), antennas_(antennas), reflectors_(std::move(reflectors)) {
  const int c = clusters();
  if (c < 1 || antennas_ < 1 || antennas_ % c != 0) {
    throw std::invalid_argument("SpatialTransform: " + std::to_string(c) +
                                " clusters do not divide " + std::to_string(antennas_) +
                                " antennas");
  }
  for (const auto& v : reflectors_) {
    if (!v) continue;
    if (v->size() != cluster_size()) {
      throw std::invalid_argument("SpatialTransform: reflector length mismatch");
    }
    if (v->squaredNorm() == 0.0) {
      throw std::invalid_argument("SpatialTransform: zero reflector vector");
    }
  }
}

SpatialTransform SpatialTransform::identity(int antennas, int clusters) {
  return {TransformKind::identity, antennas,
          std::vector<std::optional<ComplexVector>>(std::max(clusters, 0))};
}

void SpatialTransform::apply_inplace(Eigen::Ref<ComplexMatrix> x) const {
  if (x.rows() != antennas_) {
    throw std::invalid_argument("apply_transform: expected " + std::to_string(antennas_) +
                                " rows, got " + std::to_string(x.rows()));
  }
  const int s = cluster_size();
  for (int c = 0; c < clusters(); ++c) {
    if (reflectors_[c]) householder_apply_inplace(*reflectors_[c], x.middleRows(c * s, s));
  }
}

ComplexVector SpatialTransform::apply(const ComplexVector& y) const {
  ComplexMatrix out = y;
  apply_inplace(out);
  return out.col(0);
}

ComplexMatrix SpatialTransform::dense() const {
  ComplexMatrix f = ComplexMatrix::Identity(antennas_, antennas_);
  const int s = cluster_size();
  for (int c = 0; c < clusters(); ++c) {
    if (reflectors_[c]) f.block(c * s, c * s, s, s) = householder_matrix(*reflectors_[c]);
  }
  return f;
}

ComplexVector apply_transform(const SpatialTransform& f, const ComplexVector& y) {
  return f.apply(y);
}

std::optional<ComplexVector> isolation_reflector(const ComplexVector& a) {
  const double nrm = a.norm();
  if (nrm == 0.0) return std::nullopt;
  ComplexVector v = a;
  v(0) += nrm * complex_sign(a(0));
  return v;
}

SpatialTransform design_hr_iso(const ComplexVector& h_strong, int clusters) {
  const auto b = static_cast<int>(h_strong.size());
  if (clusters < 1 || b % clusters != 0) {
    throw std::invalid_argument("design_hr_iso: " + std::to_string(clusters) +
                                " clusters do not divide " + std::to_string(b) + " antennas");
  }
  const int s = b / clusters;
  std::vector<std::optional<ComplexVector>> reflectors(clusters);
  for (int c = 0; c < clusters; ++c) {
    reflectors[c] = isolation_reflector(h_strong.segment(c * s, s));
  }
  return {TransformKind::hr_iso, b, std::move(reflectors)};
}

SpatialTransform design_hr_max(std::span<const HermitianMatrix> covariance_blocks,
                               const EigenOptions& options) {
  if (covariance_blocks.empty()) {
    throw std::invalid_argument("design_hr_max: no covariance blocks");
  }
  const Eigen::Index s = covariance_blocks.front().dim();
  std::vector<std::optional<ComplexVector>> reflectors;
  reflectors.reserve(covariance_blocks.size());
  for (const auto& block : covariance_blocks) {
    if (block.dim() != s) throw std::invalid_argument("design_hr_max: unequal blocks");
    if (block.matrix().cwiseAbs().maxCoeff() == 0.0) {
      reflectors.emplace_back();
      continue;
    }
    const EigenPair top = dominant_eigenpair(block, options);
    ComplexVector v = top.vector;
    v(0) += complex_sign(top.vector(0));
    reflectors.emplace_back(std::move(v));
  }
  return {TransformKind::hr_max, static_cast<int>(s * covariance_blocks.size()),
          std::move(reflectors)};
}

namespace {

std::vector<HermitianMatrix> diagonal_blocks(const HermitianMatrix& c, int clusters) {
  if (clusters < 1 || c.dim() % clusters != 0) {
    throw std::invalid_argument("covariance dimension " + std::to_string(c.dim()) +
                                " is not divisible by " + std::to_string(clusters) +
                                " clusters");
  }
  const Eigen::Index s = c.dim() / clusters;
  std::vector<HermitianMatrix> blocks;
  blocks.reserve(clusters);
  for (int k = 0; k < clusters; ++k) {
    blocks.emplace_back(ComplexMatrix(c.matrix().block(k * s, k * s, s, s)));
  }
  return blocks;
}

}  // namespace

SpatialTransform design_hr_max(const HermitianMatrix& covariance, int clusters,
                               const EigenOptions& options) {
  return design_hr_max(diagonal_blocks(covariance, clusters), options);
}

// --- quantizer -------------------------------------------------------------

double midrise_quantize(double x, int bits, double step) {
  const double levels_half = std::ldexp(1.0, bits - 1);
  if (std::abs(x) >= step * levels_half) {
    return std::copysign(0.5 * step * (2.0 * levels_half - 1.0), x);
  }
  const double k = std::clamp(std::floor(x / step), -levels_half, levels_half - 1.0);
  return step * (k + 0.5);
}

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double normal_pdf(double x) {
  if (std::isinf(x)) return 0.0;
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// P(a <= x < b) for standard normal x, using whichever tail keeps precision.
double normal_mass(double a, double b) {
  if (a >= 0.0) return 0.5 * (std::erfc(a * kInvSqrt2) - std::erfc(b * kInvSqrt2));
  if (b <= 0.0) return 0.5 * (std::erfc(-b * kInvSqrt2) - std::erfc(-a * kInvSqrt2));
  return 1.0 - 0.5 * std::erfc(b * kInvSqrt2) - 0.5 * std::erfc(-a * kInvSqrt2);
}

double x_pdf(double x) { return std::isinf(x) ? 0.0 : x * normal_pdf(x); }

// Quantizer cell k spans [k step, (k+1) step) with level (k + 1/2) step; the
// outermost cells extend to infinity (saturation).
struct CellMoments {
  double level;
  double mass;    // P(cell)
  double first;   // E[x 1{cell}]
  double second;  // E[x^2 1{cell}]
};

template <typename Fn>
void for_each_cell(int bits, double step, Fn&& fn) {
  if (bits < 1 || bits > 30) throw std::invalid_argument("quantizer bits out of range");
  if (!(step > 0.0)) throw std::invalid_argument("quantizer step must be positive");
  const long half = 1L << (bits - 1);
  const double inf = std::numeric_limits<double>::infinity();
  for (long k = -half; k < half; ++k) {
    const double lo = (k == -half) ? -inf : step * static_cast<double>(k);
    const double hi = (k == half - 1) ? inf : step * static_cast<double>(k + 1);
    const double mass = normal_mass(lo, hi);
    const double first = normal_pdf(lo) - normal_pdf(hi);
    const double second = mass + x_pdf(lo) - x_pdf(hi);
    fn(CellMoments{step * (static_cast<double>(k) + 0.5), mass, first, second});
  }
}

}  // namespace

double quantizer_mse(int bits, double step) {
  double mse = 0.0;
  for_each_cell(bits, step, [&](const CellMoments& m) {
    mse += m.level * m.level * m.mass - 2.0 * m.level * m.first + m.second;
  });
  return mse;
}

double optimal_step_size(int bits) {
  if (bits < 1 || bits > 12) {
    throw std::invalid_argument("optimal_step_size: bits must lie in [1, 12], got " +
                                std::to_string(bits));
  }
  // Coarse log-spaced scan to bracket the minimum, then Brent refinement.
  constexpr int kScan = 400;
  const double lo = std::log(1e-5);
  const double hi = std::log(4.0);
  auto at = [&](int i) { return std::exp(lo + (hi - lo) * i / (kScan - 1)); };
  int best = 0;
  double best_mse = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double mse = quantizer_mse(bits, at(i));
    if (mse < best_mse) {
      best_mse = mse;
      best = i;
    }
  }
  const double a = at(std::max(best - 1, 0));
  const double b = at(std::min(best + 1, kScan - 1));
  const auto result = boost::math::tools::brent_find_minima(
      [bits](double step) { return quantizer_mse(bits, step); }, a, b,
      std::numeric_limits<double>::digits / 2);
  return result.first;
}

BussgangConstants bussgang_constants(int bits, double step) {
  double gamma = 0.0;
  double energy = 0.0;
  for_each_cell(bits, step, [&](const CellMoments& m) {
    gamma += m.level * m.first;
    energy += m.level * m.level * m.mass;
  });
  return {gamma, std::max(energy - gamma * gamma, 0.0)};
}

QuantizerModel QuantizerModel::optimal(int bits) {
  const double step = optimal_step_size(bits);
  const BussgangConstants bc = bussgang_constants(bits, step);
  return {bits, step, bc.gamma, bc.distortion};
}

// --- AGC and ADC -----------------------------------------------------------

AgcGains compute_agc(std::span<const HermitianMatrix> covariance_blocks,
                     const SpatialTransform& f) {
  if (static_cast<int>(covariance_blocks.size()) != f.clusters()) {
    throw std::invalid_argument("compute_agc: block count does not match clusters");
  }
  const int s = f.cluster_size();
  RealVector diag(f.antennas());
  double trace = 0.0;
  for (int c = 0; c < f.clusters(); ++c) {
    const HermitianMatrix& block = covariance_blocks[c];
    if (block.dim() != s) throw std::invalid_argument("compute_agc: block size mismatch");
    trace += block.trace();
    const auto& v = f.reflector(c);
    if (!v) {
      diag.segment(c * s, s) = block.matrix().diagonal().real();
      continue;
    }
    // Q C Q with Q Hermitian: reflect the columns, then the rows.
    ComplexMatrix qc = block.matrix();
    householder_apply_inplace(*v, qc);
    ComplexMatrix qcq = qc.adjoint();
    householder_apply_inplace(*v, qcq);
    diag.segment(c * s, s) = qcq.diagonal().real();
  }
  const double floor =
      std::max(1e-12 * trace / f.antennas(), std::numeric_limits<double>::min());
  AgcGains gains;
  gains.omega = (2.0 / diag.array().max(floor)).sqrt().matrix();
  return gains;
}

AgcGains compute_agc(const HermitianMatrix& covariance, const SpatialTransform& f) {
  return compute_agc(diagonal_blocks(covariance, f.clusters()), f);
}

ComplexVector adc(const ComplexVector& y_tilde, const AgcGains& agc,
                  const QuantizerModel& quant) {
  if (y_tilde.size() != agc.omega.size()) {
    throw std::invalid_argument("adc: dimension mismatch");
  }
  ComplexVector r(y_tilde.size());
  for (Eigen::Index b = 0; b < y_tilde.size(); ++b) {
    const cdouble scaled = agc.omega(b) * y_tilde(b);
    r(b) = {midrise_quantize(scaled.real(), quant.bits, quant.step),
            midrise_quantize(scaled.imag(), quant.bits, quant.step)};
  }
  return r;
}

}  // namespace hdrmimo
