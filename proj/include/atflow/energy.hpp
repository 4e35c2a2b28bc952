#pragma once

#include "atflow/grid.hpp"

namespace atflow {

/// Holder exponent conjugate to p: p' = p/(p-1).
double p_conjugate(double p);

/// Normalization (p/2)^{p'} that calibrates the diffuse surface energy so a
/// fully developed transition layer costs one unit of energy per unit length.
double at_normalization(double p);

/// Parameters of the regularized energy, plus the datum g.
///
/// The energy of a pair (u, rho) is
///   1/2 int (eta + rho^2) |grad u|^2
///   + int ( eps^{p-1}/p |grad rho|^p + alpha/(p' eps) (1-rho)^p )
///   + beta/2 int (u - g)^2,
/// with alpha = (p/2)^{p'} and p > 2.
struct Params {
  double epsilon = 0.0;
  double eta = 0.0;
  double p = 0.0;
  double p_prime = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  Field g;
};

Params make_params(double epsilon, double eta, double p, double beta, Field g);

struct EnergyBreakdown {
  double bulk = 0.0;      // gradient part plus fidelity
  double surface = 0.0;   // phase-field part
  double fidelity = 0.0;  // the beta/2 term alone, also contained in bulk
  double total = 0.0;     // bulk + surface
};

/// Cell quadrature, with rho entering the |grad u|^2 integrand through the cell
/// mean (so the operator solved in the u step is the exact Hessian of this
/// energy) and the (1-rho)^p term integrated with the lumped nodal weights (so
/// its energy gradient is pointwise and the constrained rho subproblem is
/// strictly convex).
EnergyBreakdown total_energy(const Field& u, const PhaseField& rho, const Params& P);

double surface_energy(const PhaseField& rho, const Params& P);
double bulk_energy(const Field& u, const PhaseField& rho, const Params& P);

/// Mass-represented partial gradient in u:
///   grad_u = -divergence_adjoint((eta + rhobar^2) gradient(u)) + beta (u - g),
/// satisfying <grad_u, phi>_M = d/ds E(u + s phi, rho)|_{s=0} exactly.
Field grad_u(const Field& u, const PhaseField& rho, const Params& P);

/// Mass-represented partial gradient in rho: cell-averaged rho |grad u|^2 term,
/// pointwise -(alpha (p-1)/eps) (1-rho)^{p-1}, and the p-Laplacian flux
/// adjoint. The flux is 0 where grad rho = 0 (the analytic limit for p > 2).
Field grad_rho(const Field& u, const PhaseField& rho, const Params& P);

/// Diffuse crack-length functional (p/2) int (1-rho)^{p-1} |grad rho|,
/// evaluated by cell quadrature with the cell-mean rho. Always bounded above
/// by surface_energy (weighted Young inequality, with equality exactly for the
/// optimal transition profile).
double diffuse_crack_length(const PhaseField& rho, const Params& P);

/// Sharp-interface energy estimate: 1/2 int |grad u|^2 over cells with cell
/// mean rho >= rho_cut, plus diffuse_crack_length, plus the fidelity term.
double ms_energy_estimate(const Field& u, const PhaseField& rho, const Params& P,
                          double rho_cut = 0.5);

}  // namespace atflow
