#include "hdrmimo/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hdrmimo {

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (bs_antennas < 1) fail("bs_antennas must be positive");
  if (clusters < 1) fail("clusters must be positive");
  if (bs_antennas % clusters != 0) {
    fail("clusters = " + std::to_string(clusters) + " does not divide bs_antennas = " +
         std::to_string(bs_antennas));
  }
  if (ues < 2) fail("ues must be at least 2");
  if (bs_antennas < ues) fail("bs_antennas must be at least ues");
  if (rho_db < dr_limit_db) fail("rho_db must be at least dr_limit_db");
  if (channel.paths < 1) fail("paths must be positive");
  if (channel.sector_deg < 0.0 || channel.sector_deg > 90.0)
    fail("sector_deg must lie in [0, 90]");
  if (channel.shadowing_std_db < 0.0) fail("shadowing_std_db must be nonnegative");
}

ComplexVector steering_vector(int antennas, double angle_rad) {
  ComplexVector a(antennas);
  const double phase = std::numbers::pi * std::sin(angle_rad);
  for (int b = 0; b < antennas; ++b) a(b) = std::polar(1.0, phase * b);
  return a;
}

ComplexVector geometric_channel_vector(int antennas, const UeGeometry& geometry) {
  const std::size_t paths = geometry.angles_rad.size();
  if (paths == 0 || geometry.path_gains.size() != paths) {
    throw std::invalid_argument("geometric_channel_vector: inconsistent path lists");
  }
  ComplexVector g = ComplexVector::Zero(antennas);
  for (std::size_t l = 0; l < paths; ++l) {
    g += geometry.path_gains[l] * steering_vector(antennas, geometry.angles_rad[l]);
  }
  return g * std::sqrt(geometry.shadowing / static_cast<double>(paths));
}

UeGeometry draw_ue_geometry(const ChannelModelParams& params, Rng& rng) {
  const int paths = params.paths;
  // Geometric power profile normalized to sum 1; each gain carries variance
  // L * p_l so that E||g||^2 = B * shadowing after the 1/sqrt(L) factor.
  std::vector<double> power(paths);
  for (int l = 0; l < paths; ++l) power[l] = std::pow(10.0, -params.path_decay_db * l / 10.0);
  const double total = std::accumulate(power.begin(), power.end(), 0.0);

  const double sector = params.sector_deg * std::numbers::pi / 180.0;
  std::uniform_real_distribution<double> angle(-sector, sector);
  std::normal_distribution<double> normal;

  UeGeometry geo;
  geo.angles_rad.resize(paths);
  geo.path_gains.resize(paths);
  for (int l = 0; l < paths; ++l) {
    geo.angles_rad[l] = angle(rng);
    geo.path_gains[l] = complex_normal(rng, paths * power[l] / total);
  }
  geo.shadowing = std::pow(10.0, params.shadowing_std_db * normal(rng) / 10.0);
  return geo;
}

ComplexMatrix generate_channel(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  ComplexMatrix g(cfg.bs_antennas, cfg.ues);
  for (int u = 0; u < cfg.ues; ++u) {
    g.col(u) = geometric_channel_vector(cfg.bs_antennas, draw_ue_geometry(cfg.channel, rng));
  }
  return g;
}

std::vector<double> power_control_gains(std::span<const double> powers,
                                        double dr_limit_db) {
  if (powers.empty()) {
    throw std::invalid_argument("power_control_gains: empty controlled set");
  }
  const double p_min = *std::min_element(powers.begin(), powers.end());
  if (!(p_min > 0.0)) {
    throw std::invalid_argument("power_control_gains: zero-norm channel column");
  }
  const double ceiling = std::pow(10.0, dr_limit_db / 10.0) * p_min;
  std::vector<double> gains(powers.size());
  for (std::size_t i = 0; i < powers.size(); ++i) {
    gains[i] = std::sqrt(std::min(1.0, ceiling / powers[i]));
  }
  return gains;
}

double strong_ue_gain(double strong_power, double weakest_received_power,
                      double rho_db) {
  if (!(strong_power > 0.0) || !(weakest_received_power > 0.0)) {
    throw std::invalid_argument("strong_ue_gain: zero-norm channel column");
  }
  return std::sqrt(std::pow(10.0, rho_db / 10.0) * weakest_received_power / strong_power);
}

ChannelRealization assemble_realization(const ComplexMatrix& g,
                                        const ScenarioConfig& cfg,
                                        bool all_controlled) {
  const Eigen::Index users = g.cols();
  if (users < 2) throw std::invalid_argument("assemble_realization: need at least 2 UEs");
  const RealVector powers = g.colwise().squaredNorm().transpose();

  RealVector d(users);
  if (all_controlled) {
    const auto gains = power_control_gains({powers.data(), static_cast<std::size_t>(users)},
                                           cfg.dr_limit_db);
    for (Eigen::Index u = 0; u < users; ++u) d(u) = gains[u];
  } else {
    Eigen::Index strong = 0;
    powers.maxCoeff(&strong);
    std::vector<double> controlled;
    std::vector<Eigen::Index> controlled_idx;
    for (Eigen::Index u = 0; u < users; ++u) {
      if (u == strong) continue;
      controlled.push_back(powers(u));
      controlled_idx.push_back(u);
    }
    const auto gains = power_control_gains(controlled, cfg.dr_limit_db);
    double weakest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < gains.size(); ++i) {
      d(controlled_idx[i]) = gains[i];
      weakest = std::min(weakest, gains[i] * gains[i] * controlled[i]);
    }
    d(strong) = strong_ue_gain(powers(strong), weakest, cfg.rho_db);
  }

  std::vector<Eigen::Index> order(users);
  std::iota(order.begin(), order.end(), 0);
  const RealVector received = powers.cwiseProduct(d.cwiseAbs2());
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return received(a) > received(b);
  });

  ChannelRealization out;
  out.G.resize(g.rows(), users);
  out.gains.resize(users);
  for (Eigen::Index k = 0; k < users; ++k) {
    out.G.col(k) = g.col(order[k]);
    out.gains(k) = d(order[k]);
  }
  out.H = out.G * out.gains.asDiagonal();
  out.strongest_index = 0;
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  const std::size_t n = values.size();
  std::sort(values.begin(), values.end());
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

NoiseModel noise_variance_from_msnr(const ComplexMatrix& h, double msnr_db) {
  const RealVector p = h.colwise().squaredNorm().transpose();
  const double med = median({p.data(), p.data() + p.size()});
  if (!(med > 0.0)) throw std::invalid_argument("noise_variance_from_msnr: zero channel");
  const double users = static_cast<double>(h.cols());
  const double antennas = static_cast<double>(h.rows());
  return {users * med / (antennas * std::pow(10.0, msnr_db / 10.0))};
}

ComplexVector observe(const ComplexMatrix& h, const ComplexVector& s,
                      const NoiseModel& noise, Rng& rng) {
  if (h.cols() != s.size()) throw std::invalid_argument("observe: dimension mismatch");
  ComplexVector y = h * s;
  for (Eigen::Index b = 0; b < y.size(); ++b) y(b) += complex_normal(rng, noise.n0);
  return y;
}

}  // namespace hdrmimo
