#include "hdrmimo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "hdrmimo/equalizer.hpp"
#include "hdrmimo/frontend.hpp"
#include "hdrmimo/training.hpp"

namespace hdrmimo {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::perfect: return "perfect";
    case Method::wsu: return "wsu";
    case Method::none: return "none";
    case Method::hr_iso: return "hr-iso";
    case Method::hr_max: return "hr-max";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::vector<double> ExperimentConfig::msnr_grid() const {
  std::vector<double> grid;
  if (!(msnr_step > 0.0) || msnr_stop < msnr_start) return grid;
  const auto n = static_cast<long>(std::floor((msnr_stop - msnr_start) / msnr_step + 1e-9)) + 1;
  grid.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) grid.push_back(msnr_start + static_cast<double>(i) * msnr_step);
  return grid;
}

int ExperimentConfig::effective_pilot_length() const {
  if (pilot_length > 0) return pilot_length;
  int k = 1;
  while (k < scenario.ues) k <<= 1;
  return k;
}

void ExperimentConfig::validate() const {
  try {
    scenario.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const std::string key = msg.substr(0, msg.find_first_of(" ="));
    throw ConfigError(key, msg);
  }
  if (q_bits < 1 || q_bits > 12) throw ConfigError("q_bits", "must lie in [1, 12]");
  if (methods.empty()) throw ConfigError("methods", "at least one method is required");
  if (!(msnr_step > 0.0)) throw ConfigError("msnr_step", "must be positive");
  if (msnr_stop < msnr_start) throw ConfigError("msnr_stop", "must not be below msnr_start");
  if (realizations < 1) throw ConfigError("realizations", "must be at least 1");
  if (symbols < 1) throw ConfigError("symbols", "must be at least 1");
  if (threads < 0) throw ConfigError("threads", "must be nonnegative");
  const int k = effective_pilot_length();
  if (k < scenario.ues || !is_power_of_two(static_cast<std::size_t>(k))) {
    throw ConfigError("pilot_length", "must be a power of two >= ues");
  }
}

namespace {

const QuantizerModel& cached_quantizer(int bits) {
  static std::mutex mutex;
  static std::map<int, QuantizerModel> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(bits);
  if (it == cache.end()) it = cache.emplace(bits, QuantizerModel::optimal(bits)).first;
  return it->second;
}

// Routes training observations through F = I, a genie AGC set from the true
// per-antenna power, and the ADC; the result is rescaled by 1 / (gamma omega).
ComplexMatrix quantize_training(const ComplexMatrix& y_t, const ComplexMatrix& h,
                                const NoiseModel& noise, const QuantizerModel& quant) {
  const RealVector power = (h.rowwise().squaredNorm().array() + noise.n0).matrix();
  AgcGains agc{(2.0 / power.array()).sqrt().matrix()};
  ComplexMatrix out(y_t.rows(), y_t.cols());
  for (Eigen::Index k = 0; k < y_t.cols(); ++k) {
    const ComplexVector r = adc(y_t.col(k), agc, quant);
    out.col(k) = (r.array() / (quant.gamma * agc.omega.array()).cast<cdouble>()).matrix();
  }
  return out;
}

std::vector<HermitianMatrix> true_covariance_blocks(const ComplexMatrix& h, double n0,
                                                    int clusters) {
  const Eigen::Index s = h.rows() / clusters;
  std::vector<HermitianMatrix> blocks;
  blocks.reserve(clusters);
  for (int c = 0; c < clusters; ++c) {
    const auto rows = h.middleRows(c * s, s);
    ComplexMatrix cov = rows * rows.adjoint();
    cov.diagonal().array() += n0;
    blocks.emplace_back(cov);
  }
  return blocks;
}

void fill_random_bits(Rng& rng, std::vector<std::uint8_t>& bits) {
  std::uint64_t word = 0;
  int left = 0;
  for (auto& b : bits) {
    if (left == 0) {
      word = rng();
      left = 64;
    }
    b = static_cast<std::uint8_t>(word & 1U);
    word >>= 1;
    --left;
  }
}

}  // namespace

TrialResult run_trial(const ExperimentConfig& cfg, Method method, std::size_t point_index,
                      std::size_t realization_index) {
  const std::vector<double> grid = cfg.msnr_grid();
  if (point_index >= grid.size()) throw std::out_of_range("run_trial: point index out of range");
  const double msnr_db = grid[point_index];
  const ScenarioConfig& sc = cfg.scenario;

  Rng rng(derive_stream_seed(cfg.seed, method_index(method), point_index, realization_index));

  const ComplexMatrix g = generate_channel(sc, rng);
  const ChannelRealization ch = assemble_realization(g, sc, method == Method::wsu);
  const NoiseModel noise = noise_variance_from_msnr(ch.H, msnr_db);
  const bool quantized = method != Method::perfect;
  const QuantizerModel quant = quantized ? cached_quantizer(cfg.q_bits) : QuantizerModel{};

  ComplexMatrix h_hat;
  std::vector<HermitianMatrix> cov_blocks;
  if (cfg.perfect_csi) {
    h_hat = ch.H;
    cov_blocks = true_covariance_blocks(ch.H, noise.n0, sc.clusters);
  } else {
    const PilotMatrix pilots = generate_pilots(static_cast<std::size_t>(sc.ues),
                                               static_cast<std::size_t>(cfg.effective_pilot_length()));
    ComplexMatrix y_t = simulate_training(ch.H, pilots, noise, rng);
    if (cfg.quantized_training && quantized) y_t = quantize_training(y_t, ch.H, noise, quant);
    h_hat = ls_channel_estimate(y_t, pilots);
    cov_blocks = sample_covariance_blocks(y_t, sc.clusters);
  }

  SpatialTransform f = SpatialTransform::identity(sc.bs_antennas, sc.clusters);
  if (method == Method::hr_iso) {
    f = design_hr_iso(h_hat.col(strongest_ue_index(h_hat)), sc.clusters);
  } else if (method == Method::hr_max) {
    f = design_hr_max(cov_blocks);
  }

  AgcGains agc;
  EqualizerMatrix w;
  if (quantized) {
    agc = compute_agc(cov_blocks, f);
    w = build_lmmse(h_hat, f, agc, quant, noise.n0);
  } else {
    w = build_unquantized_lmmse(h_hat, noise.n0);
  }

  TrialResult result;
  std::vector<std::uint8_t> tx(static_cast<std::size_t>(sc.ues) * qam16::kBitsPerSymbol);
  for (int t = 0; t < cfg.symbols; ++t) {
    fill_random_bits(rng, tx);
    const ComplexVector s = qam16::modulate(tx);
    const ComplexVector y = observe(ch.H, s, noise, rng);
    ComplexVector r;
    if (quantized) {
      const ComplexVector y_tilde = f.apply(y);
      if (t == 0) {
        const double ny = y.norm();
        if (std::abs(y_tilde.norm() - ny) > 1e-12 * ny) {
          throw std::logic_error("run_trial: spatial transform changed the signal energy");
        }
      }
      r = adc(y_tilde, agc, quant);
    } else {
      r = y;
    }
    const auto rx = qam16::slice(equalize(w, r));
    const BitErrorCount c = count_bit_errors(tx, rx);
    result.bit_errors += c.errors;
    result.total_bits += c.total;
  }
  return result;
}

std::vector<ResultRecord> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<double> grid = cfg.msnr_grid();
  const std::size_t n_methods = cfg.methods.size();
  const std::size_t n_points = grid.size();
  const auto n_real = static_cast<std::size_t>(cfg.realizations);
  const std::size_t n_units = n_methods * n_points * n_real;

  std::vector<TrialResult> unit_results(n_units);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t unit = next.fetch_add(1);
      if (unit >= n_units) return;
      const std::size_t m = unit / (n_points * n_real);
      const std::size_t p = (unit / n_real) % n_points;
      const std::size_t r = unit % n_real;
      try {
        unit_results[unit] = run_trial(cfg, cfg.methods[m], p, r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_units);
        return;
      }
    }
  };

  unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                       : std::max(1U, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, std::max<std::size_t>(n_units, 1)));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ResultRecord> records;
  records.reserve(n_methods * n_points);
  for (std::size_t m = 0; m < n_methods; ++m) {
    for (std::size_t p = 0; p < n_points; ++p) {
      ResultRecord rec;
      rec.method = std::string(method_name(cfg.methods[m]));
      rec.rho_db = cfg.scenario.rho_db;
      rec.q = cfg.q_bits;
      rec.clusters = cfg.scenario.clusters;
      rec.bs_antennas = cfg.scenario.bs_antennas;
      rec.ues = cfg.scenario.ues;
      rec.msnr_db = grid[p];
      for (std::size_t r = 0; r < n_real; ++r) {
        const TrialResult& t = unit_results[(m * n_points + p) * n_real + r];
        rec.bit_errors += t.bit_errors;
        rec.total_bits += t.total_bits;
      }
      rec.ber = rec.total_bits == 0 ? 0.0
                                    : static_cast<double>(rec.bit_errors) /
                                          static_cast<double>(rec.total_bits);
      rec.realizations = cfg.realizations;
      rec.seed = cfg.seed;
      records.push_back(std::move(rec));
    }
  }
  return records;
}

// --- CSV -------------------------------------------------------------------

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view text, const std::string& what) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw std::invalid_argument("cannot parse " + what + " from '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_csv(const std::vector<ResultRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += r.method;
    out += ',' + format_double(r.rho_db);
    out += ',' + std::to_string(r.q);
    out += ',' + std::to_string(r.clusters);
    out += ',' + std::to_string(r.bs_antennas);
    out += ',' + std::to_string(r.ues);
    out += ',' + format_double(r.msnr_db);
    out += ',' + std::to_string(r.bit_errors);
    out += ',' + std::to_string(r.total_bits);
    out += ',' + format_double(r.ber);
    out += ',' + std::to_string(r.realizations);
    out += ',' + std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

std::vector<ResultRecord> parse_csv(std::string_view text) {
  std::vector<ResultRecord> records;
  bool header = true;
  for (std::string_view line : split(text, '\n')) {
    line = trim(line);
    if (line.empty()) continue;
    if (header) {
      if (line != kCsvHeader) throw std::invalid_argument("parse_csv: unexpected header");
      header = false;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 12) throw std::invalid_argument("parse_csv: expected 12 fields");
    ResultRecord r;
    r.method = std::string(f[0]);
    r.rho_db = parse_number<double>(f[1], "rho_db");
    r.q = parse_number<int>(f[2], "q");
    r.clusters = parse_number<int>(f[3], "C");
    r.bs_antennas = parse_number<int>(f[4], "B");
    r.ues = parse_number<int>(f[5], "U");
    r.msnr_db = parse_number<double>(f[6], "msnr_db");
    r.bit_errors = parse_number<std::uint64_t>(f[7], "bit_errors");
    r.total_bits = parse_number<std::uint64_t>(f[8], "total_bits");
    r.ber = parse_number<double>(f[9], "ber");
    r.realizations = parse_number<int>(f[10], "realizations");
    r.seed = parse_number<std::uint64_t>(f[11], "seed");
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

void write_csv(const std::vector<ResultRecord>& records, const std::string& path) {
  if (records.empty()) throw std::invalid_argument("write_csv: no records");
  write_text(path, format_csv(records));
}

std::string format_plot_script(const std::vector<ResultRecord>& records,
                               const std::string& csv_path) {
  std::vector<std::string> methods;
  for (const auto& r : records) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
  }
  std::ostringstream s;
  s << "# BER vs MSNR; columns: 1 = method, 7 = msnr_db, 10 = ber\n";
  s << "set datafile separator ','\n";
  s << "set logscale y\n";
  s << "set format y '10^{%L}'\n";
  s << "set xlabel 'MSNR [dB]'\n";
  s << "set ylabel 'uncoded BER'\n";
  s << "set grid\n";
  s << "set key bottom left\n";
  if (!records.empty()) {
    const auto& r = records.front();
    s << "set title 'B=" << r.bs_antennas << ", U=" << r.ues << ", C=" << r.clusters
      << ", q=" << r.q << ", rho=" << format_double(r.rho_db) << " dB'\n";
  }
  s << "file = '" << csv_path << "'\n";
  s << "plot ";
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (i) s << ", \\\n     ";
    s << "file every ::1 using (strcol(1) eq '" << methods[i]
      << "' && $10 > 0 ? $7 : 1/0):10 with linespoints title '" << methods[i] << "'";
  }
  s << "\n";
  return s.str();
}

void emit_plot_script(const std::vector<ResultRecord>& records, const std::string& csv_path,
                      const std::string& script_path) {
  if (records.empty()) throw std::invalid_argument("emit_plot_script: no records");
  write_text(script_path, format_plot_script(records, csv_path));
}

// --- configuration ---------------------------------------------------------

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> kv;
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "empty key");
    kv[key] = std::string(trim(line.substr(eq + 1)));
  }
  return kv;
}

namespace {

template <typename T>
T parse_value(const std::string& key, const std::string& value) {
  try {
    return parse_number<T>(value, key);
  } catch (const std::invalid_argument&) {
    throw ConfigError(key, "cannot parse '" + value + "' as a number");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError(key, "cannot parse '" + value + "' as a boolean");
}

std::vector<Method> parse_methods(const std::string& key, const std::string& value) {
  std::vector<Method> out;
  for (std::string_view item : split(value, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(parse_method(item));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what());
    }
  }
  return out;
}

}  // namespace

void apply_config_value(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
  ScenarioConfig& sc = cfg.scenario;
  if (key == "rho_db") sc.rho_db = parse_value<double>(key, value);
  else if (key == "dr_limit_db") sc.dr_limit_db = parse_value<double>(key, value);
  else if (key == "q_bits" || key == "q") cfg.q_bits = parse_value<int>(key, value);
  else if (key == "clusters") sc.clusters = parse_value<int>(key, value);
  else if (key == "bs_antennas") sc.bs_antennas = parse_value<int>(key, value);
  else if (key == "ues") sc.ues = parse_value<int>(key, value);
  else if (key == "paths") sc.channel.paths = parse_value<int>(key, value);
  else if (key == "sector_deg") sc.channel.sector_deg = parse_value<double>(key, value);
  else if (key == "path_decay_db") sc.channel.path_decay_db = parse_value<double>(key, value);
  else if (key == "shadowing_std_db") sc.channel.shadowing_std_db = parse_value<double>(key, value);
  else if (key == "pilot_length") cfg.pilot_length = parse_value<int>(key, value);
  else if (key == "msnr_start") cfg.msnr_start = parse_value<double>(key, value);
  else if (key == "msnr_stop") cfg.msnr_stop = parse_value<double>(key, value);
  else if (key == "msnr_step") cfg.msnr_step = parse_value<double>(key, value);
  else if (key == "methods") cfg.methods = parse_methods(key, value);
  else if (key == "realizations") cfg.realizations = parse_value<int>(key, value);
  else if (key == "symbols") cfg.symbols = parse_value<int>(key, value);
  else if (key == "seed") cfg.seed = parse_value<std::uint64_t>(key, value);
  else if (key == "out") cfg.out = value;
  else if (key == "plot_script") cfg.plot_script = value;
  else if (key == "threads") cfg.threads = parse_value<int>(key, value);
  else if (key == "quantized_training") cfg.quantized_training = parse_bool(key, value);
  else if (key == "perfect_csi") cfg.perfect_csi = parse_bool(key, value);
  else throw ConfigError(key, "unknown configuration key");
}

ExperimentConfig load_config(std::string_view file_text,
                             const std::map<std::string, std::string>& overrides) {
  ExperimentConfig cfg;
  for (const auto& [k, v] : parse_key_values(file_text)) apply_config_value(cfg, k, v);
  for (const auto& [k, v] : overrides) apply_config_value(cfg, k, v);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::optional<std::string>& path,
                                  const std::map<std::string, std::string>& overrides) {
  std::string text;
  if (path) {
    std::ifstream in(*path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot open '" + *path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return load_config(text, overrides);
}

}  // namespace hdrmimo
