#include "atflow/config.hpp"

#include "atflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace atflow {

namespace {

const std::set<std::string> kKnownKeys = {
    "nx", "ny", "lx", "ly",
    "epsilon", "eta", "p", "beta",
    "g_path", "g_format", "u0", "u0_format",
    "scheme",
    "delta", "steps", "deltas", "delta0", "growth", "ratio_bound",
    "cg_tol", "pg_tol", "tol_alt", "max_sweeps", "pg_max_iter",
    "snapshot_every", "snapshot_format", "out_dir",
    "delta1", "delta2", "n_thresholds", "rho_cut",
    "seed"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a number");
  }
  if (pos != v.size())
    throw ConfigError("key '" + key + "': trailing characters in '" + v + "'");
  if (!std::isfinite(x)) throw ConfigError("key '" + key + "': value must be finite");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + v + "' as an integer");
  }
  if (pos != v.size())
    throw ConfigError("key '" + key + "': trailing characters in '" + v + "'");
  return x;
}

std::vector<double> to_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw ConfigError("key '" + key + "': empty entry in list");
    out.push_back(to_double(key, item));
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!kKnownKeys.count(key)) throw ConfigError("unknown key '" + key + "'");
    if (kv.count(key)) throw ConfigError("duplicate key '" + key + "'");
    kv[key] = val;
  }

  auto has = [&](const char* k) { return kv.count(k) > 0; };
  auto need = [&](const char* k) -> const std::string& {
    auto it = kv.find(k);
    if (it == kv.end()) throw ConfigError(std::string("missing required key '") + k + "'");
    return it->second;
  };

  RunConfig c;
  c.nx = static_cast<int>(to_int("nx", need("nx")));
  c.ny = static_cast<int>(to_int("ny", need("ny")));
  if (c.nx < 2) throw ConfigError("key 'nx': must be >= 2");
  if (c.ny < 2) throw ConfigError("key 'ny': must be >= 2");
  if (has("lx")) c.lx = to_double("lx", kv["lx"]);
  if (has("ly")) c.ly = to_double("ly", kv["ly"]);
  if (!(c.lx > 0.0)) throw ConfigError("key 'lx': must be > 0");
  if (!(c.ly > 0.0)) throw ConfigError("key 'ly': must be > 0");

  c.epsilon = to_double("epsilon", need("epsilon"));
  if (!(c.epsilon > 0.0)) throw ConfigError("key 'epsilon': must be > 0");
  if (has("eta")) c.eta = to_double("eta", kv["eta"]);
  if (!(c.eta > 0.0 && c.eta < 1.0)) throw ConfigError("key 'eta': must lie in (0,1)");
  c.p = to_double("p", need("p"));
  if (!(c.p > 2.0)) throw ConfigError("key 'p': must be > 2");
  c.beta = to_double("beta", need("beta"));
  if (!(c.beta >= 0.0)) throw ConfigError("key 'beta': must be >= 0");

  c.g_path = need("g_path");
  if (has("g_format")) c.g_format = kv["g_format"];
  if (c.g_format != "csv" && c.g_format != "pgm")
    throw ConfigError("key 'g_format': must be csv or pgm");
  if (has("u0")) c.u0 = kv["u0"];
  if (c.u0.empty()) throw ConfigError("key 'u0': must be 'copy-g' or a path");
  if (has("u0_format")) c.u0_format = kv["u0_format"];
  if (c.u0_format != "csv" && c.u0_format != "pgm")
    throw ConfigError("key 'u0_format': must be csv or pgm");

  if (has("scheme")) c.scheme = kv["scheme"];
  if (c.scheme != "global" && c.scheme != "alternate")
    throw ConfigError("key 'scheme': must be global or alternate");

  // Time partition: exactly one of uniform (delta+steps), explicit (deltas),
  // geometric (delta0+growth+steps).
  const bool uniform = has("delta");
  const bool explicit_list = has("deltas");
  const bool geometric = has("delta0") || has("growth");
  if (static_cast<int>(uniform) + static_cast<int>(explicit_list) +
          static_cast<int>(geometric) !=
      1)
    throw ConfigError(
        "time partition: provide exactly one of 'delta'+'steps', 'deltas', or "
        "'delta0'+'growth'+'steps'");
  if (uniform) {
    const double d = to_double("delta", kv["delta"]);
    const long long n = to_int("steps", need("steps"));
    if (n < 1) throw ConfigError("key 'steps': must be >= 1");
    c.deltas.assign(static_cast<std::size_t>(n), d);
  } else if (explicit_list) {
    c.deltas = to_double_list("deltas", kv["deltas"]);
  } else {
    const double d0 = to_double("delta0", need("delta0"));
    const double gr = to_double("growth", need("growth"));
    const long long n = to_int("steps", need("steps"));
    if (n < 1) throw ConfigError("key 'steps': must be >= 1");
    if (!(gr > 0.0)) throw ConfigError("key 'growth': must be > 0");
    c.deltas.resize(static_cast<std::size_t>(n));
    double d = d0;
    for (auto& x : c.deltas) {
      x = d;
      d *= gr;
    }
  }
  if (has("ratio_bound")) c.ratio_bound = to_double("ratio_bound", kv["ratio_bound"]);
  if (!(c.ratio_bound >= 1.0)) throw ConfigError("key 'ratio_bound': must be >= 1");

  TimePartition part{c.deltas, c.ratio_bound};
  const auto violations = validate_partition(part);
  if (!violations.empty())
    throw ConfigError("time partition: " + violations.front().what + " at index " +
                      std::to_string(violations.front().index));

  if (has("cg_tol")) c.cg_tol = to_double("cg_tol", kv["cg_tol"]);
  if (!(c.cg_tol > 0.0)) throw ConfigError("key 'cg_tol': must be > 0");
  if (has("pg_tol")) c.pg_tol = to_double("pg_tol", kv["pg_tol"]);
  if (!(c.pg_tol > 0.0)) throw ConfigError("key 'pg_tol': must be > 0");
  if (has("tol_alt")) c.tol_alt = to_double("tol_alt", kv["tol_alt"]);
  if (!(c.tol_alt >= 0.0)) throw ConfigError("key 'tol_alt': must be >= 0");
  if (has("max_sweeps")) c.max_sweeps = static_cast<int>(to_int("max_sweeps", kv["max_sweeps"]));
  if (c.max_sweeps < 1) throw ConfigError("key 'max_sweeps': must be >= 1");
  if (has("pg_max_iter"))
    c.pg_max_iter = static_cast<int>(to_int("pg_max_iter", kv["pg_max_iter"]));
  if (c.pg_max_iter < 1) throw ConfigError("key 'pg_max_iter': must be >= 1");

  if (has("snapshot_every"))
    c.snapshot_every = static_cast<int>(to_int("snapshot_every", kv["snapshot_every"]));
  if (c.snapshot_every < 0) throw ConfigError("key 'snapshot_every': must be >= 0");
  if (has("snapshot_format")) c.snapshot_format = kv["snapshot_format"];
  if (c.snapshot_format != "csv" && c.snapshot_format != "pgm")
    throw ConfigError("key 'snapshot_format': must be csv or pgm");
  if (has("out_dir")) c.out_dir = kv["out_dir"];

  if (has("delta1")) c.delta1 = to_double("delta1", kv["delta1"]);
  if (has("delta2")) c.delta2 = to_double("delta2", kv["delta2"]);
  if (!(c.delta1 > 0.0 && c.delta1 < 1.0)) throw ConfigError("key 'delta1': must lie in (0,1)");
  if (!(c.delta2 > 0.0 && c.delta2 < 1.0)) throw ConfigError("key 'delta2': must lie in (0,1)");
  if (!(c.delta1 < c.delta2)) throw ConfigError("key 'delta2': must exceed delta1");
  if (has("n_thresholds"))
    c.n_thresholds = static_cast<int>(to_int("n_thresholds", kv["n_thresholds"]));
  if (c.n_thresholds < 1) throw ConfigError("key 'n_thresholds': must be >= 1");
  if (has("rho_cut")) c.rho_cut = to_double("rho_cut", kv["rho_cut"]);
  if (!(c.rho_cut > 0.0 && c.rho_cut < 1.0)) throw ConfigError("key 'rho_cut': must lie in (0,1)");

  if (has("seed")) {
    const long long s = to_int("seed", kv["seed"]);
    if (s < 0) throw ConfigError("key 'seed': must be >= 0");
    c.seed = static_cast<unsigned long long>(s);
  }
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const RunConfig& c) {
  std::ostringstream o;
  o << "beta = " << fmt(c.beta) << "\n";
  o << "cg_tol = " << fmt(c.cg_tol) << "\n";
  o << "delta1 = " << fmt(c.delta1) << "\n";
  o << "delta2 = " << fmt(c.delta2) << "\n";
  o << "deltas = ";
  for (std::size_t i = 0; i < c.deltas.size(); ++i)
    o << (i ? "," : "") << fmt(c.deltas[i]);
  o << "\n";
  o << "epsilon = " << fmt(c.epsilon) << "\n";
  o << "eta = " << fmt(c.eta) << "\n";
  o << "g_format = " << c.g_format << "\n";
  o << "g_path = " << c.g_path << "\n";
  o << "lx = " << fmt(c.lx) << "\n";
  o << "ly = " << fmt(c.ly) << "\n";
  o << "max_sweeps = " << c.max_sweeps << "\n";
  o << "n_thresholds = " << c.n_thresholds << "\n";
  o << "nx = " << c.nx << "\n";
  o << "ny = " << c.ny << "\n";
  o << "out_dir = " << c.out_dir << "\n";
  o << "p = " << fmt(c.p) << "\n";
  o << "pg_max_iter = " << c.pg_max_iter << "\n";
  o << "pg_tol = " << fmt(c.pg_tol) << "\n";
  o << "ratio_bound = " << fmt(c.ratio_bound) << "\n";
  o << "rho_cut = " << fmt(c.rho_cut) << "\n";
  o << "scheme = " << c.scheme << "\n";
  o << "seed = " << c.seed << "\n";
  o << "snapshot_every = " << c.snapshot_every << "\n";
  o << "snapshot_format = " << c.snapshot_format << "\n";
  o << "tol_alt = " << fmt(c.tol_alt) << "\n";
  o << "u0 = " << c.u0 << "\n";
  o << "u0_format = " << c.u0_format << "\n";
  return o.str();
}

}  // namespace atflow
