#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace atflow {

/// Fully resolved run configuration. parse_config() fills defaults, rejects
/// unknown keys, and validates every range before any compute can start.
struct RunConfig {
  // grid
  int nx = 0, ny = 0;
  double lx = 1.0, ly = 1.0;
  // energy parameters
  double epsilon = 0.0;
  double eta = 1e-4;
  double p = 0.0;
  double beta = 0.0;
  // data
  std::string g_path;
  std::string g_format = "csv";  // csv | pgm
  std::string u0 = "copy-g";     // "copy-g" or a path
  std::string u0_format = "csv";
  // scheme
  std::string scheme = "alternate";  // global | alternate
  // time partition (resolved to an explicit list)
  std::vector<double> deltas;
  double ratio_bound = 10.0;
  // tolerances
  double cg_tol = 1e-10;
  double pg_tol = 1e-8;
  double tol_alt = 1e-10;
  int max_sweeps = 200;
  int pg_max_iter = 20000;
  // outputs
  int snapshot_every = 0;                // 0 = none
  std::string snapshot_format = "csv";   // csv | pgm
  std::string out_dir = "out";
  // crack slicing
  double delta1 = 0.1;
  double delta2 = 0.9;
  int n_thresholds = 33;
  double rho_cut = 0.5;
  // bookkeeping
  unsigned long long seed = 0;
};

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Parses the flat `key = value` format (one key per line, # comments).
/// Unknown keys, missing required keys and range violations throw ConfigError
/// naming the offending key.
RunConfig parse_config(const std::string& text);

RunConfig parse_config_file(const std::string& path);

/// Resolved configuration echoed back as the same key = value format
/// (sorted keys), used for the run_meta file.
std::string format_config(const RunConfig& cfg);

}  // namespace atflow
