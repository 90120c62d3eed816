// Command-line driver: runs one BER-vs-MSNR sweep and writes the CSV (and
// optionally a gnuplot script).

#include <chrono>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hdrmimo/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantized massive MU-MIMO uplink BER simulator"};

  std::optional<std::string> config_path;
  std::map<std::string, std::string> overrides;
  app.add_option("--config", config_path, "flat key = value configuration file");

  // Flag name -> config key; values are forwarded verbatim and validated by
  // the config loader so file and flag errors read the same.
  const std::pair<const char*, const char*> flags[] = {
      {"--rho-db", "rho_db"},          {"--q-bits", "q_bits"},
      {"--clusters", "clusters"},      {"--bs-antennas", "bs_antennas"},
      {"--ues", "ues"},                {"--msnr-start", "msnr_start"},
      {"--msnr-stop", "msnr_stop"},    {"--msnr-step", "msnr_step"},
      {"--methods", "methods"},        {"--realizations", "realizations"},
      {"--symbols", "symbols"},        {"--seed", "seed"},
      {"--out", "out"},                {"--plot-script", "plot_script"},
      {"--threads", "threads"},        {"--dr-limit-db", "dr_limit_db"},
      {"--paths", "paths"},            {"--sector-deg", "sector_deg"},
      {"--path-decay-db", "path_decay_db"},
      {"--shadowing-std-db", "shadowing_std_db"},
      {"--pilot-length", "pilot_length"},
      {"--quantized-training", "quantized_training"},
      {"--perfect-csi", "perfect_csi"},
  };
  std::map<std::string, std::string> raw;
  for (const auto& [flag, key] : flags) {
    app.add_option(flag, raw[key], std::string("overrides config key '") + key + "'");
  }
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress progress output");

  CLI11_PARSE(app, argc, argv);

  for (const auto& [flag, key] : flags) {
    if (app.count(flag) > 0) overrides[key] = raw[key];
  }

  try {
    const hdrmimo::ExperimentConfig cfg = hdrmimo::load_config_file(config_path, overrides);
    const auto start = std::chrono::steady_clock::now();
    const auto records = hdrmimo::run_sweep(cfg);
    hdrmimo::write_csv(records, cfg.out);
    if (!cfg.plot_script.empty()) hdrmimo::emit_plot_script(records, cfg.out, cfg.plot_script);
    if (!quiet) {
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::cerr << "wrote " << records.size() << " records to " << cfg.out << " in " << secs
                << " s\n";
      for (const auto& r : records) {
        std::cerr << "  " << r.method << "  msnr " << r.msnr_db << " dB  ber " << r.ber << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
