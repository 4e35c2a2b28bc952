#pragma once

#include "atflow/config.hpp"
#include "atflow/diagnostics.hpp"
#include "atflow/energy.hpp"
#include "atflow/u_step.hpp"

#include <string>
#include <utility>
#include <vector>

namespace atflow {

/// Sequence of time steps delta^i with the ratio condition
/// sup_i delta^{i+1}/delta^i <= ratio_bound.
struct TimePartition {
  std::vector<double> deltas;
  double ratio_bound = 10.0;

  /// t^i = sum of the first i deltas (t^0 = 0).
  double time_at(std::size_t i) const;
};

struct PartitionViolation {
  std::size_t index = 0;
  std::string what;
};

/// Reports every index violating positivity or the ratio bound; empty = ok.
std::vector<PartitionViolation> validate_partition(const TimePartition& p);

struct Tolerances {
  double cg_tol = 1e-10;
  double pg_tol = 1e-8;
  double tol_alt = 1e-10;
  int max_sweeps = 200;
  int pg_max_iter = 20000;
};

struct FlowState {
  int step = 0;
  double t = 0.0;
  Field u;
  PhaseField rho;
};

struct StepRecord {
  int step = 0;
  double t = 0.0;
  double delta = 0.0;
  EnergyBreakdown energy;
  double velocity_norm = 0.0;  // ||u^i - u^{i-1}||_M / delta
  double slope = 0.0;
  long inner_iterations = 0;   // CG plus projected-gradient iterations
  AuditReport audit;
};

struct Snapshot {
  int step = 0;
  Field u;
  Field rho;
};

struct Trace {
  GridSpec grid;
  TimePartition partition;
  EnergyBreakdown initial_energy;  // at (u_0, rho_0)
  double u0_linf = 0.0;
  double g_linf = 0.0;
  std::vector<StepRecord> records;
  std::vector<Snapshot> snapshots;
  FlowState final_state;
};

/// A step failed mid-run; carries the trace accumulated so far.
class FlowError : public std::runtime_error {
 public:
  FlowError(const std::string& msg, Trace partial)
      : std::runtime_error(msg), trace(std::move(partial)) {}
  Trace trace;
};

/// One implicit time step of size delta: alternate exact block minimizations
/// of E(u, rho) + 1/(2 delta) ||u - u_prev||_M^2, the u block proximal to the
/// previous time step and the rho block constrained by the obstacle
/// rho <= rho_prev (the previous time step, not the inner iterate). Sweeps
/// stop when the per-sweep objective decrease falls below tol_alt * scale or
/// max_sweeps is reached. Every block move descends, so the single-step
/// energy inequality holds by construction.
std::pair<FlowState, StepRecord> step_global(const FlowState& state, double delta,
                                             const Params& P, const Tolerances& tols);

/// Exactly one u solve against rho_prev followed by one constrained rho solve:
/// step_global capped at one sweep.
std::pair<FlowState, StepRecord> step_alternate(const FlowState& state, double delta,
                                                const Params& P,
                                                const Tolerances& tols);

/// Full run: rho initialized by minimizing E(u_0, .), then the configured step
/// variant over the partition, with per-step audits and optional snapshots.
Trace run_flow(const RunConfig& cfg, const Field& g, const Field& u0);

/// Same, loading g (and u_0 unless "copy-g") from the configured paths.
Trace run_flow(const RunConfig& cfg);

}  // namespace atflow
