#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hdrmimo/numerics.hpp"

namespace hdrmimo {

enum class TransformKind { identity, hr_iso, hr_max };

std::string_view to_string(TransformKind kind);

/// Block-diagonal analog transform F = diag(F_1, ..., F_C). Each block is a
/// Householder reflector Q_{v_c}, or the identity when no reflector is stored
/// for that cluster.
class SpatialTransform {
 public:
  SpatialTransform(TransformKind kind, int antennas,
                   std::vector<std::optional<ComplexVector>> reflectors);

  static SpatialTransform identity(int antennas, int clusters);

  TransformKind kind() const { return kind_; }
  int antennas() const { return antennas_; }
  int clusters() const { return static_cast<int>(reflectors_.size()); }
  int cluster_size() const { return antennas_ / clusters(); }
  const std::optional<ComplexVector>& reflector(int cluster) const {
    return reflectors_.at(cluster);
  }

  /// F y, one rank-1 update per cluster.
  ComplexVector apply(const ComplexVector& y) const;

  /// X <- F X for a B-row matrix.
  void apply_inplace(Eigen::Ref<ComplexMatrix> x) const;

  /// Materialized B x B matrix. Test and diagnostics use only.
  ComplexMatrix dense() const;

 private:
  TransformKind kind_;
  int antennas_;
  std::vector<std::optional<ComplexVector>> reflectors_;
};

/// Reflector vector a + ||a|| sign(a_1) e_1 mapping a onto a multiple of e_1;
/// std::nullopt for a zero vector.
std::optional<ComplexVector> isolation_reflector(const ComplexVector& a);

/// HR-ISO: per cluster, reflect the strong UE's channel slice onto the first
/// output. Zero slices fall back to identity blocks.
SpatialTransform design_hr_iso(const ComplexVector& h_strong, int clusters);

/// HR-MAX: per cluster, reflect the dominant eigenvector of the cluster's
/// covariance block onto the first output. Zero blocks fall back to identity.
SpatialTransform design_hr_max(std::span<const HermitianMatrix> covariance_blocks,
                               const EigenOptions& options = {});

/// Overload taking the full B x B covariance; only its diagonal blocks are used.
SpatialTransform design_hr_max(const HermitianMatrix& covariance, int clusters,
                               const EigenOptions& options = {});

ComplexVector apply_transform(const SpatialTransform& f, const ComplexVector& y);

// --- ADC model -------------------------------------------------------------

/// Uniform midrise quantizer with 2^bits levels. Inputs with
/// |x| >= step * 2^{bits-1} saturate at +-(step/2)(2^bits - 1).
double midrise_quantize(double x, int bits, double step);

/// E[(Q(x) - x)^2] for x ~ N(0, 1), evaluated cell by cell in closed form.
double quantizer_mse(int bits, double step);

/// Step size minimizing quantizer_mse for unit-variance Gaussian input.
/// Valid for 1 <= bits <= 12.
double optimal_step_size(int bits);

struct BussgangConstants {
  double gamma = 1.0;       ///< E[Q(x) x] / E[x^2]
  double distortion = 0.0;  ///< E[Q(x)^2] - gamma^2
};

/// Bussgang gain and distortion power for x ~ N(0, 1).
BussgangConstants bussgang_constants(int bits, double step);

struct QuantizerModel {
  int bits = 3;
  double step = 1.0;
  double gamma = 1.0;
  double distortion = 0.0;

  /// MSE-optimal step with its Bussgang constants.
  static QuantizerModel optimal(int bits);
};

struct AgcGains {
  RealVector omega;
};

/// omega_b = sqrt(2 / [F C F^H]_{bb}); diagonals are floored at
/// 1e-12 * trace(C) / B first.
AgcGains compute_agc(std::span<const HermitianMatrix> covariance_blocks,
                     const SpatialTransform& f);

AgcGains compute_agc(const HermitianMatrix& covariance, const SpatialTransform& f);

/// r_b = Q(Re{w_b y_b}) + j Q(Im{w_b y_b}).
ComplexVector adc(const ComplexVector& y_tilde, const AgcGains& agc,
                  const QuantizerModel& quant);

}  // namespace hdrmimo
