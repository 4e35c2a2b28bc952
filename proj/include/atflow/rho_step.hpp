#pragma once

#include "atflow/energy.hpp"
#include "atflow/u_step.hpp"

#include <utility>

namespace atflow {

/// Reference magnitude of the rho-gradient for this parameter set; pg_tol is
/// relative to it, so the stopping rule is state independent.
double rho_gradient_scale(const Params& P, const GridSpec& g);

/// Minimizes rho -> E(u, rho) over { 0 <= rho <= rho_bar } for fixed u.
///
/// Projected gradient with a Barzilai-Borwein trial step and monotone Armijo
/// backtracking (factor 0.5, sufficient-decrease constant 1e-4, step clamped
/// to [1e-10, 1e10]). The descent direction is scaled by a diagonal curvature
/// estimate; without it the spread of |grad u|^2 across cells makes the
/// iteration crawl. The projection min(rho, rho_bar) then max(rho, 0) is the
/// last arithmetic act, so feasibility of the result is exact. Stops when the
/// mass norm of the projected (KKT) gradient is <= pg_tol * rho_gradient_scale.
///
/// `start` defaults to rho_bar; any start is projected onto the feasible box
/// before the first iteration.
std::pair<PhaseField, SolveReport> solve_rho_step(const Field& u,
                                                  const PhaseField& rho_bar,
                                                  const Params& P, double pg_tol,
                                                  int max_iter,
                                                  const Field* start = nullptr);

/// Unconstrained-obstacle initialization: solve_rho_step with rho_bar == 1.
/// The minimizer is unique by strict convexity.
PhaseField init_rho(const Field& u0, const Params& P, double pg_tol,
                    int max_iter = 20000);

}  // namespace atflow
