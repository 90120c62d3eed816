#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hdrmimo/channel.hpp"

namespace hdrmimo {

enum class Method { perfect, wsu, none, hr_iso, hr_max };

inline constexpr std::array<Method, 5> kAllMethods = {
    Method::perfect, Method::wsu, Method::none, Method::hr_iso, Method::hr_max};

std::string_view method_name(Method m);

/// Accepts the CSV names: perfect, wsu, none, hr-iso, hr-max.
Method parse_method(std::string_view name);

/// Stable index used for substream derivation; independent of list order.
constexpr std::uint64_t method_index(Method m) { return static_cast<std::uint64_t>(m); }

struct ExperimentConfig {
  ScenarioConfig scenario;
  int q_bits = 3;
  int pilot_length = 0;  ///< 0 selects the smallest power of two >= U
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  double msnr_start = -10.0;
  double msnr_stop = 15.0;
  double msnr_step = 1.0;
  int realizations = 100;
  int symbols = 200;
  std::uint64_t seed = 1;
  std::string out = "results.csv";
  std::string plot_script;
  int threads = 0;  ///< 0 selects std::thread::hardware_concurrency()
  bool quantized_training = false;
  bool perfect_csi = false;

  std::vector<double> msnr_grid() const;
  int effective_pilot_length() const;
  void validate() const;
};

struct TrialResult {
  std::uint64_t bit_errors = 0;
  std::uint64_t total_bits = 0;
};

/// One channel realization of one method at MSNR grid point `point_index`.
///
/// Pipeline: channel draw and power control (all UEs controlled for WSU),
/// N0 from the MSNR, pilot training with LS estimation and sample covariance,
/// transform design, AGC and quantizer constants, equalizer, then `symbols`
/// data slots of modulate / observe / transform / ADC / equalize / slice.
/// Deterministic in (cfg.seed, method, point_index, realization_index).
TrialResult run_trial(const ExperimentConfig& cfg, Method method, std::size_t point_index,
                      std::size_t realization_index);

struct ResultRecord {
  std::string method;
  double rho_db = 0.0;
  int q = 0;
  int clusters = 0;
  int bs_antennas = 0;
  int ues = 0;
  double msnr_db = 0.0;
  std::uint64_t bit_errors = 0;
  std::uint64_t total_bits = 0;
  double ber = 0.0;
  int realizations = 0;
  std::uint64_t seed = 0;

  bool operator==(const ResultRecord&) const = default;
};

/// Runs methods x MSNR grid x realizations on cfg.threads workers and sums
/// error counts per (method, MSNR). Records are ordered by method (config
/// order) and then MSNR.
std::vector<ResultRecord> run_sweep(const ExperimentConfig& cfg);

inline constexpr std::string_view kCsvHeader =
    "method,rho_db,q,C,B,U,msnr_db,bit_errors,total_bits,ber,realizations,seed";

std::string format_csv(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> parse_csv(std::string_view text);
void write_csv(const std::vector<ResultRecord>& records, const std::string& path);

/// gnuplot script plotting BER (log scale) against MSNR from `csv_path`, one
/// curve per method present in `records`.
std::string format_plot_script(const std::vector<ResultRecord>& records,
                               const std::string& csv_path);
void emit_plot_script(const std::vector<ResultRecord>& records, const std::string& csv_path,
                      const std::string& script_path);

// --- configuration ---------------------------------------------------------

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Flat `key = value` lines; `#` starts a comment. A repeated key keeps its
/// last value.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Applies one key to the config; throws ConfigError for unknown keys and
/// malformed values.
void apply_config_value(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

/// File values first, then `overrides` (CLI flags, same key names), then
/// validation. Constraint violations are reported as ConfigError.
ExperimentConfig load_config(std::string_view file_text,
                             const std::map<std::string, std::string>& overrides = {});

ExperimentConfig load_config_file(const std::optional<std::string>& path,
                                  const std::map<std::string, std::string>& overrides = {});

}  // namespace hdrmimo
