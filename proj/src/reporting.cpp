#include "atflow/reporting.hpp"

#include "atflow/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace atflow {

const char* kEnergiesHeader =
    "step,t,delta,total,bulk,surface,fidelity,velocity_norm,slope,inner_iters,audit_ok";

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string step_name(const char* prefix, int step, const std::string& format) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%06d.%s", prefix, step, format.c_str());
  return buf;
}

}  // namespace

void write_trace(const Trace& trace, const RunConfig& cfg, const std::string& dir) {
  std::filesystem::create_directories(dir);

  const std::string csv_path = dir + "/energies.csv";
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw std::runtime_error(csv_path + ": cannot open for writing");
  out << kEnergiesHeader << "\n";
  for (const StepRecord& r : trace.records) {
    out << r.step << ',' << fmt(r.t) << ',' << fmt(r.delta) << ','
        << fmt(r.energy.total) << ',' << fmt(r.energy.bulk) << ','
        << fmt(r.energy.surface) << ',' << fmt(r.energy.fidelity) << ','
        << fmt(r.velocity_norm) << ',' << fmt(r.slope) << ','
        << r.inner_iterations << ',' << (r.audit.all_ok() ? 1 : 0) << "\n";
  }
  if (!out) throw std::runtime_error(csv_path + ": write failed");
  out.close();

  const std::string meta_path = dir + "/run_meta.txt";
  std::ofstream meta(meta_path, std::ios::binary);
  if (!meta) throw std::runtime_error(meta_path + ": cannot open for writing");
  meta << format_config(cfg);
  meta.close();

  for (const Snapshot& s : trace.snapshots) {
    write_snapshot(s.u, dir + "/" + step_name("u", s.step, cfg.snapshot_format),
                   cfg.snapshot_format);
    write_snapshot(s.rho, dir + "/" + step_name("rho", s.step, cfg.snapshot_format),
                   cfg.snapshot_format);
  }
}

void write_sweep_report(const SweepReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/sweep_report.csv";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "epsilon,diffuse_length,sliced_perimeter,best_threshold,ms_energy,"
         "final_total_energy,initial_energy,dissipation,sharp_limit_lhs,"
         "sharp_limit_rhs,sharp_limit_ok\n";
  for (const SweepEntry& e : report.entries) {
    out << fmt(e.epsilon) << ',' << fmt(e.diffuse_length) << ','
        << fmt(e.sliced_perimeter) << ',' << fmt(e.best_threshold) << ','
        << fmt(e.ms_energy) << ',' << fmt(e.final_total_energy) << ','
        << fmt(e.initial_energy) << ',' << fmt(e.dissipation) << ','
        << fmt(e.sharp_limit_lhs) << ',' << fmt(e.sharp_limit_rhs) << ','
        << (e.sharp_limit_ok ? 1 : 0) << "\n";
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace atflow
