#include "atflow/u_step.hpp"

#include <cmath>

namespace atflow {

BulkOperator::BulkOperator(const PhaseField& rho, const Params& P, double delta)
    : grid_(rho.grid) {
  if (!(delta > 0.0)) throw std::invalid_argument("BulkOperator: delta must be > 0");
  shift_ = 1.0 / delta + P.beta;
  kappa_ = P.eta + cell_means(grid_, rho.values).square();
  weights_ = lumped_weights(grid_);

  // Assembled stiffness diagonal: each incident cell contributes
  // a * kappa * (1/(4 hx^2) + 1/(4 hy^2)).
  const double hx = grid_.hx();
  const double hy = grid_.hy();
  const double stencil = grid_.cell_area() * (0.25 / (hx * hx) + 0.25 / (hy * hy));
  Array kdiag = Array::Zero(grid_.num_nodes());
  const int nx = grid_.nx;
  const int cx = grid_.cells_x();
  for (int j = 0; j < grid_.cells_y(); ++j) {
    const int n0 = j * nx;
    const int c0 = j * cx;
    for (int i = 0; i < cx; ++i) {
      const double v = stencil * kappa_[c0 + i];
      kdiag[n0 + i] += v;
      kdiag[n0 + i + 1] += v;
      kdiag[n0 + nx + i] += v;
      kdiag[n0 + nx + i + 1] += v;
    }
  }
  diag_ = shift_ + kdiag / weights_;

  tgx_.resize(grid_.num_cells());
  tgy_.resize(grid_.num_cells());
  tdiv_.resize(grid_.num_nodes());
}

void BulkOperator::apply(const Array& v, Array& out) const {
  gradient_into(grid_, v, tgx_, tgy_);
  tgx_ *= kappa_;
  tgy_ *= kappa_;
  divergence_adjoint_into(grid_, tgx_, tgy_, weights_, tdiv_);
  out = shift_ * v - tdiv_;
}

std::pair<Field, SolveReport> solve_u_step(const Field& u_prev, const PhaseField& rho,
                                           double delta, const Params& P,
                                           double cg_tol, int max_iter) {
  if (!(delta > 0.0)) throw std::invalid_argument("solve_u_step: delta must be > 0");
  if (!(u_prev.grid == rho.grid) || !(u_prev.grid == P.g.grid))
    throw std::invalid_argument("solve_u_step: u_prev, rho and g must share one grid");

  const GridSpec& g = u_prev.grid;
  const int n = g.num_nodes();
  if (max_iter < 0) max_iter = 10 * n;

  const BulkOperator A(rho, P, delta);
  const Array& w = A.weights();
  const Array b = u_prev.values / delta + P.beta * P.g.values;
  const double bnorm = std::sqrt((w * b.square()).sum());
  const double tol_abs = cg_tol * (bnorm > 0.0 ? bnorm : 1.0);

  Array x = u_prev.values;
  Array r(n), z(n), p(n), Ap(n);
  A.apply(x, Ap);
  r = b - Ap;

  SolveReport rep;
  double rnorm = std::sqrt((w * r.square()).sum());
  if (rnorm <= tol_abs) {
    rep.converged = true;
    rep.relative_residual = bnorm > 0.0 ? rnorm / bnorm : 0.0;
    return {Field(g, std::move(x)), rep};
  }

  z = r / A.jacobi_diagonal();
  p = z;
  double rz = (w * r * z).sum();

  for (int k = 0; k < max_iter; ++k) {
    A.apply(p, Ap);
    const double pAp = (w * p * Ap).sum();
    const double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    rep.iterations = k + 1;

    rnorm = std::sqrt((w * r.square()).sum());
    if (rnorm <= tol_abs) {
      rep.converged = true;
      break;
    }
    z = r / A.jacobi_diagonal();
    const double rz_new = (w * r * z).sum();
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }

  rep.relative_residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  if (!rep.converged)
    throw SolverError("solve_u_step: conjugate gradients did not reach tolerance " +
                          std::to_string(cg_tol) + " within " +
                          std::to_string(max_iter) + " iterations",
                      rep);
  return {Field(g, std::move(x)), rep};
}

}  // namespace atflow
