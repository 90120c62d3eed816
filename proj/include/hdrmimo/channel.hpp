#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hdrmimo/numerics.hpp"
#include "hdrmimo/random.hpp"

namespace hdrmimo {

/// Parameters of the synthetic geometric mmWave channel. These defaults are
/// modelling choices, not measured values.
struct ChannelModelParams {
  int paths = 5;
  double sector_deg = 60.0;       ///< angles drawn uniformly in [-sector, sector]
  double path_decay_db = 5.0;     ///< power drop between consecutive paths
  double shadowing_std_db = 8.0;  ///< log-normal shadowing, median 1
};

struct ScenarioConfig {
  int bs_antennas = 256;
  int ues = 32;
  int clusters = 32;
  double rho_db = 30.0;
  double dr_limit_db = 6.0;
  ChannelModelParams channel;

  int cluster_size() const { return bs_antennas / clusters; }

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

/// Per-UE propagation geometry: g = sqrt(shadowing) / sqrt(L) * sum_l gain_l a(angle_l).
struct UeGeometry {
  std::vector<double> angles_rad;
  std::vector<cdouble> path_gains;
  double shadowing = 1.0;
};

/// Half-wavelength ULA steering vector [1, e^{j pi sin t}, ..., e^{j pi (B-1) sin t}].
ComplexVector steering_vector(int antennas, double angle_rad);

ComplexVector geometric_channel_vector(int antennas, const UeGeometry& geometry);

UeGeometry draw_ue_geometry(const ChannelModelParams& params, Rng& rng);

/// B x U propagation matrix G with independently drawn UE geometries.
ComplexMatrix generate_channel(const ScenarioConfig& cfg, Rng& rng);

/// Min-rule power control. Given received powers ||g_u||^2 of the controlled
/// UEs, returns amplitude gains d_u with
///   d_u^2 = min(1, 10^{limit/10} * P_min / ||g_u||^2).
std::vector<double> power_control_gains(std::span<const double> powers,
                                        double dr_limit_db);

/// Amplitude gain of the strong UE such that its received power sits exactly
/// rho_db above `weakest_received_power` (= d_U^2 ||g_U||^2).
double strong_ue_gain(double strong_power, double weakest_received_power,
                      double rho_db);

struct ChannelRealization {
  ComplexMatrix G;          ///< B x U propagation channel, columns sorted with H
  RealVector gains;         ///< d_u
  ComplexMatrix H;          ///< G diag(d), columns in descending norm order
  Eigen::Index strongest_index = 0;
};

/// Power-controls G and sorts UEs by effective channel norm.
///
/// With `all_controlled` false the UE with the largest ||g_u|| is designated
/// strong, the other U-1 UEs are power-controlled to dr_limit_db, and the
/// strong UE's gain is set from rho_db. With `all_controlled` true every UE is
/// in the power-control pool and rho_db is ignored.
ChannelRealization assemble_realization(const ComplexMatrix& g,
                                        const ScenarioConfig& cfg,
                                        bool all_controlled = false);

struct NoiseModel {
  double n0 = 0.0;
};

/// Median of the values; for an even count, the mean of the two middle ones.
double median(std::vector<double> values);

/// N0 = U * median ||h_u||^2 / (B * 10^{msnr/10}).
NoiseModel noise_variance_from_msnr(const ComplexMatrix& h, double msnr_db);

/// y = H s + n, n ~ CN(0, N0 I).
ComplexVector observe(const ComplexMatrix& h, const ComplexVector& s,
                      const NoiseModel& noise, Rng& rng);

}  // namespace hdrmimo
