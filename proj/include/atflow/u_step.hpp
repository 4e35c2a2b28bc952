#pragma once

#include "atflow/energy.hpp"
#include "atflow/grid.hpp"

#include <stdexcept>
#include <utility>

namespace atflow {

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& msg, SolveReport rep)
      : std::runtime_error(msg), report(rep) {}
  SolveReport report;
};

/// Matrix-free action v -> (1/delta + beta) v + L v, where L is the
/// mass-represented stiffness v -> -divergence_adjoint((eta + rhobar^2) grad v).
/// Symmetric positive definite in the lumped-mass inner product.
class BulkOperator {
 public:
  BulkOperator(const PhaseField& rho, const Params& P, double delta);

  void apply(const Array& v, Array& out) const;

  const Array& weights() const { return weights_; }
  const Array& jacobi_diagonal() const { return diag_; }
  const GridSpec& grid() const { return grid_; }

 private:
  GridSpec grid_;
  double shift_;    // 1/delta + beta
  Array kappa_;     // per-cell eta + rhobar^2
  Array weights_;   // lumped mass
  Array diag_;      // diagonal of the mass-represented operator
  mutable Array tgx_, tgy_, tdiv_;
};

/// Minimizes E(u, rho) + 1/(2 delta) ||u - u_prev||_M^2 over u for fixed rho:
/// Jacobi-preconditioned conjugate gradients in the mass inner product, warm
/// started from u_prev, run to relative residual <= cg_tol.
///
/// max_iter < 0 selects the default cap of 10 * nx * ny.
std::pair<Field, SolveReport> solve_u_step(const Field& u_prev, const PhaseField& rho,
                                           double delta, const Params& P,
                                           double cg_tol = 1e-10, int max_iter = -1);

}  // namespace atflow
