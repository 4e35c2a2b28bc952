#pragma once

#include "atflow/energy.hpp"

namespace atflow {

struct AuditCheck {
  bool ok = true;
  double violation = 0.0;  // magnitude of the worst violation, >= 0
};

/// Per-step audit of the laws the flow is expected to obey: irreversibility of
/// rho, the maximum principle for u, the single-step energy inequality, and
/// the monotonicity of the surface (up) and bulk (down) energies.
struct AuditReport {
  AuditCheck rho_monotone;
  AuditCheck max_principle;
  AuditCheck energy_inequality;
  AuditCheck surface_monotone;
  AuditCheck bulk_monotone;

  bool all_ok() const {
    return rho_monotone.ok && max_principle.ok && energy_inequality.ok &&
           surface_monotone.ok && bulk_monotone.ok;
  }
};

/// Unilateral slope at (u, rho): the lumped-mass norm of grad_u. The rho
/// direction contributes nothing when rho minimizes its own subproblem, so
/// this equals the mass norm of the full constrained-descent residual there.
double slope(const Field& u, const PhaseField& rho, const Params& P);

/// Evaluates every audit inequality between two consecutive states with
/// tolerance 1e-9 times the energy scale. Reports, never throws.
AuditReport audit_step(const Field& u_prev, const PhaseField& rho_prev,
                       const Field& u_next, const PhaseField& rho_next,
                       double delta, const Params& P);

/// Perimeter of the sublevel set {rho < s}, computed by marching squares on
/// the cell-mean field. s must lie in (0,1).
double level_set_perimeter(const PhaseField& rho, double s);

struct CrackEstimate {
  double threshold = 0.0;  // the scanned s with minimal perimeter
  double perimeter = 0.0;
  double diffuse_length = 0.0;
};

/// Scans n_thresholds equispaced levels in (delta1, delta2) and returns the
/// one of minimal perimeter (ties break to the smallest s), together with the
/// diffuse crack length for comparison.
CrackEstimate extract_crack(const PhaseField& rho, const Params& P, double delta1,
                            double delta2, int n_thresholds);

}  // namespace atflow
