#pragma once

#include "atflow/flow.hpp"

#include <functional>
#include <vector>

namespace atflow {

struct SweepEntry {
  double epsilon = 0.0;
  double diffuse_length = 0.0;    // at the final state
  double sliced_perimeter = 0.0;  // minimal-perimeter level set
  double best_threshold = 0.0;
  double ms_energy = 0.0;
  double final_total_energy = 0.0;
  double initial_energy = 0.0;          // E_eps(u_0, rho_0)
  double dissipation = 0.0;             // sum of delta * velocity^2
  double sharp_limit_lhs = 0.0;         // ms_energy + dissipation
  double sharp_limit_rhs = 0.0;         // sharp energy of the initial datum
  bool sharp_limit_ok = false;          // lhs <= rhs within 10% slack
};

/// Per-epsilon results of the vanishing-regularization study.
/// Entries are ordered by strictly decreasing epsilon.
struct SweepReport {
  std::vector<SweepEntry> entries;
};

/// Runs the flow once per epsilon with shared grid, data, beta, p and
/// partition, and reports crack-length and sharp-energy estimates. Every
/// epsilon must satisfy max(hx, hy) <= eps/4, else a validation error names
/// the under-resolved epsilon. `on_trace`, when given, receives each
/// completed per-epsilon trace.
SweepReport eps_sweep(const RunConfig& base_cfg, const std::vector<double>& eps_list,
                      const Field& g, const Field& u0,
                      const std::function<void(double, const Trace&)>& on_trace = {});

/// Same, loading g and u_0 from the configured paths.
SweepReport eps_sweep(const RunConfig& base_cfg, const std::vector<double>& eps_list,
                      const std::function<void(double, const Trace&)>& on_trace = {});

}  // namespace atflow
