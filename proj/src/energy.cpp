#include "atflow/energy.hpp"

#include "atflow/powers.hpp"

#include <cmath>

namespace atflow {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_grids(const Field& u, const PhaseField& rho, const Params& P,
                 const char* who) {
  if (!(u.grid == rho.grid) || !(u.grid == P.g.grid))
    throw std::invalid_argument(std::string(who) + ": u, rho and g must share one grid");
}

// (1-r)^p and its derivative factor, with the |.| guard so directional probes
// slightly past r = 1 stay well defined.
double well(double r, double p) { return detail::pow_pos(std::abs(1.0 - r), p); }

double well_prime_mag(double r, double p) {
  const double s = 1.0 - r;
  const double mag = detail::pow_pos(std::abs(s), p - 1.0);
  return s >= 0.0 ? mag : -mag;
}

}  // namespace

double p_conjugate(double p) { return p / (p - 1.0); }

double at_normalization(double p) { return std::pow(0.5 * p, p_conjugate(p)); }

Params make_params(double epsilon, double eta, double p, double beta, Field g) {
  require(std::isfinite(epsilon) && epsilon > 0.0, "make_params: epsilon must be > 0");
  require(std::isfinite(eta) && eta > 0.0 && eta < 1.0,
          "make_params: eta must lie in (0,1)");
  require(std::isfinite(p) && p > 2.0, "make_params: p must be > 2");
  require(std::isfinite(beta) && beta >= 0.0, "make_params: beta must be >= 0");
  Params P;
  P.epsilon = epsilon;
  P.eta = eta;
  P.p = p;
  P.p_prime = p_conjugate(p);
  P.alpha = at_normalization(p);
  P.beta = beta;
  P.g = std::move(g);
  return P;
}

double surface_energy(const PhaseField& rho, const Params& P) {
  const GridSpec& g = rho.grid;
  const double p = P.p;
  const double grad_coef = std::pow(P.epsilon, p - 1.0) / p;
  const double well_coef = P.alpha / (P.p_prime * P.epsilon);

  Array gx(g.num_cells()), gy(g.num_cells());
  gradient_into(g, rho.values, gx, gy);
  const Array m = gx.square() + gy.square();
  double grad_part = 0.0;
  for (Eigen::Index c = 0; c < m.size(); ++c) grad_part += detail::pow_pos(m[c], 0.5 * p);
  grad_part *= grad_coef * g.cell_area();

  const Array w = lumped_weights(g);
  double well_part = 0.0;
  for (Eigen::Index n = 0; n < w.size(); ++n)
    well_part += w[n] * well(rho.values[n], p);
  well_part *= well_coef;

  return grad_part + well_part;
}

double bulk_energy(const Field& u, const PhaseField& rho, const Params& P) {
  check_grids(u, rho, P, "bulk_energy");
  const GridSpec& g = u.grid;

  Array gx(g.num_cells()), gy(g.num_cells());
  gradient_into(g, u.values, gx, gy);
  const Array rbar = cell_means(g, rho.values);
  const double grad_part =
      0.5 * g.cell_area() *
      ((P.eta + rbar.square()) * (gx.square() + gy.square())).sum();

  const Array w = lumped_weights(g);
  const double fid = 0.5 * P.beta * (w * (u.values - P.g.values).square()).sum();
  return grad_part + fid;
}

EnergyBreakdown total_energy(const Field& u, const PhaseField& rho, const Params& P) {
  check_grids(u, rho, P, "total_energy");
  EnergyBreakdown e;
  const Array w = lumped_weights(u.grid);
  e.fidelity = 0.5 * P.beta * (w * (u.values - P.g.values).square()).sum();
  e.bulk = bulk_energy(u, rho, P);
  e.surface = surface_energy(rho, P);
  e.total = e.bulk + e.surface;
  return e;
}

Field grad_u(const Field& u, const PhaseField& rho, const Params& P) {
  check_grids(u, rho, P, "grad_u");
  const GridSpec& g = u.grid;

  Array gx(g.num_cells()), gy(g.num_cells());
  gradient_into(g, u.values, gx, gy);
  const Array kappa = P.eta + cell_means(g, rho.values).square();
  gx *= kappa;
  gy *= kappa;

  const Array w = lumped_weights(g);
  Array out(g.num_nodes());
  divergence_adjoint_into(g, gx, gy, w, out);
  out = -out + P.beta * (u.values - P.g.values);
  return Field(g, std::move(out));
}

Field grad_rho(const Field& u, const PhaseField& rho, const Params& P) {
  check_grids(u, rho, P, "grad_rho");
  const GridSpec& g = u.grid;
  const int nx = g.nx;
  const int cx = g.cells_x();
  const int cy = g.cells_y();
  const double p = P.p;
  const double quarter_area = 0.25 * g.cell_area();

  Array gx(g.num_cells()), gy(g.num_cells());
  gradient_into(g, u.values, gx, gy);
  const Array q = gx.square() + gy.square();
  const Array rbar = cell_means(g, rho.values);

  // d/drho of  1/2 sum_c a (eta + rbar^2) |grad u|^2: each node takes a quarter
  // of its cells' contributions; divide by the lumped weight afterwards.
  const Array w = lumped_weights(g);
  Array out = Array::Zero(g.num_nodes());
  for (int j = 0; j < cy; ++j) {
    const int n0 = j * nx;
    const int c0 = j * cx;
    for (int i = 0; i < cx; ++i) {
      const double v = quarter_area * rbar[c0 + i] * q[c0 + i];
      out[n0 + i] += v;
      out[n0 + i + 1] += v;
      out[n0 + nx + i] += v;
      out[n0 + nx + i + 1] += v;
    }
  }
  out /= w;

  const double well_coef = P.alpha * (p - 1.0) / P.epsilon;
  for (Eigen::Index n = 0; n < out.size(); ++n)
    out[n] -= well_coef * well_prime_mag(rho.values[n], p);

  // p-Laplacian flux eps^{p-1} |grad rho|^{p-2} grad rho, adjoined back.
  Array rx(g.num_cells()), ry(g.num_cells());
  gradient_into(g, rho.values, rx, ry);
  const double flux_coef = std::pow(P.epsilon, p - 1.0);
  for (Eigen::Index c = 0; c < rx.size(); ++c) {
    const double m = rx[c] * rx[c] + ry[c] * ry[c];
    const double f = m > 0.0 ? flux_coef * detail::pow_pos(m, 0.5 * (p - 2.0)) : 0.0;
    rx[c] *= f;
    ry[c] *= f;
  }
  Array div(g.num_nodes());
  divergence_adjoint_into(g, rx, ry, w, div);
  out -= div;

  return Field(g, std::move(out));
}

double diffuse_crack_length(const PhaseField& rho, const Params& P) {
  const GridSpec& g = rho.grid;
  const double p = P.p;
  Array gx(g.num_cells()), gy(g.num_cells());
  gradient_into(g, rho.values, gx, gy);
  const Array rbar = cell_means(g, rho.values);
  double sum = 0.0;
  for (Eigen::Index c = 0; c < rbar.size(); ++c) {
    const double mag = std::sqrt(gx[c] * gx[c] + gy[c] * gy[c]);
    sum += detail::pow_pos(std::abs(1.0 - rbar[c]), p - 1.0) * mag;
  }
  return 0.5 * p * g.cell_area() * sum;
}

double ms_energy_estimate(const Field& u, const PhaseField& rho, const Params& P,
                          double rho_cut) {
  check_grids(u, rho, P, "ms_energy_estimate");
  const GridSpec& g = u.grid;
  Array gx(g.num_cells()), gy(g.num_cells());
  gradient_into(g, u.values, gx, gy);
  const Array rbar = cell_means(g, rho.values);
  double bulk = 0.0;
  for (Eigen::Index c = 0; c < rbar.size(); ++c) {
    if (rbar[c] >= rho_cut) bulk += gx[c] * gx[c] + gy[c] * gy[c];
  }
  bulk *= 0.5 * g.cell_area();

  const Array w = lumped_weights(g);
  const double fid = 0.5 * P.beta * (w * (u.values - P.g.values).square()).sum();
  return bulk + diffuse_crack_length(rho, P) + fid;
}

}  // namespace atflow
