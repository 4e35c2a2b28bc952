#include "atflow/rho_step.hpp"

#include "atflow/powers.hpp"

#include <cmath>
#include <limits>

namespace atflow {

namespace {

constexpr double kBBMin = 1e-10;
constexpr double kBBMax = 1e10;
constexpr double kArmijo = 1e-4;
constexpr double kBacktrack = 0.5;

// Objective rho -> E(u, rho) with u frozen; mirrors total_energy / grad_rho
// term by term (the u-only fidelity constant is dropped). Alongside the
// gradient it assembles a diagonal curvature estimate used to scale the
// descent direction: the cell |grad u|^2 weights span many orders of
// magnitude across the domain and an unscaled projected gradient crawls.
class RhoObjective {
 public:
  RhoObjective(const Field& u, const Params& P) : g_(u.grid), P_(P) {
    Array gx(g_.num_cells()), gy(g_.num_cells());
    gradient_into(g_, u.values, gx, gy);
    q_ = gx.square() + gy.square();
    w_ = lumped_weights(g_);
    grad_coef_ = std::pow(P.epsilon, P.p - 1.0) / P.p;
    well_coef_e_ = P.alpha / (P.p_prime * P.epsilon);
    well_coef_g_ = P.alpha * (P.p - 1.0) / P.epsilon;
    well_coef_h_ = P.alpha * (P.p - 1.0) * (P.p - 1.0) / P.epsilon;
    flux_coef_ = std::pow(P.epsilon, P.p - 1.0);
    stencil_ = g_.cell_area() *
               (0.25 / (g_.hx() * g_.hx()) + 0.25 / (g_.hy() * g_.hy()));
    rx_.resize(g_.num_cells());
    ry_.resize(g_.num_cells());
    div_.resize(g_.num_nodes());

    // Diagonal of the (constant) bulk-term Hessian: a q / 16 per incident cell.
    Array acc = Array::Zero(g_.num_nodes());
    const int nx = g_.nx;
    const int cx = g_.cells_x();
    const double qa = g_.cell_area() / 16.0;
    for (int j = 0; j < g_.cells_y(); ++j) {
      const int n0 = j * nx;
      const int c0 = j * cx;
      for (int i = 0; i < cx; ++i) {
        const double v = qa * q_[c0 + i];
        acc[n0 + i] += v;
        acc[n0 + i + 1] += v;
        acc[n0 + nx + i] += v;
        acc[n0 + nx + i + 1] += v;
      }
    }
    bulk_diag_ = acc / w_;
  }

  double value(const Array& rho) const {
    const double p = P_.p;
    const Array rbar = cell_means(g_, rho);
    double bulk = 0.5 * g_.cell_area() * ((P_.eta + rbar.square()) * q_).sum();

    gradient_into(g_, rho, rx_, ry_);
    double grad_part = 0.0;
    for (Eigen::Index c = 0; c < rx_.size(); ++c) {
      const double m = rx_[c] * rx_[c] + ry_[c] * ry_[c];
      grad_part += detail::pow_pos(m, 0.5 * p);
    }
    grad_part *= grad_coef_ * g_.cell_area();

    double well = 0.0;
    for (Eigen::Index n = 0; n < rho.size(); ++n)
      well += w_[n] * detail::pow_pos(std::abs(1.0 - rho[n]), p);
    well *= well_coef_e_;

    return bulk + grad_part + well;
  }

  // Mass-represented gradient; `diag` receives the curvature estimate.
  void gradient(const Array& rho, Array& out, Array& diag) const {
    const double p = P_.p;
    const int nx = g_.nx;
    const int cx = g_.cells_x();
    const double quarter_area = 0.25 * g_.cell_area();
    const Array rbar = cell_means(g_, rho);

    out.setZero();
    for (int j = 0; j < g_.cells_y(); ++j) {
      const int n0 = j * nx;
      const int c0 = j * cx;
      for (int i = 0; i < cx; ++i) {
        const double v = quarter_area * rbar[c0 + i] * q_[c0 + i];
        out[n0 + i] += v;
        out[n0 + i + 1] += v;
        out[n0 + nx + i] += v;
        out[n0 + nx + i + 1] += v;
      }
    }
    out /= w_;

    diag = bulk_diag_;
    for (Eigen::Index n = 0; n < rho.size(); ++n) {
      const double s = 1.0 - rho[n];
      const double as = std::abs(s);
      const double mag = detail::pow_pos(as, p - 1.0);
      out[n] -= well_coef_g_ * (s >= 0.0 ? mag : -mag);
      diag[n] += well_coef_h_ * detail::pow_pos(as, p - 2.0);
    }

    gradient_into(g_, rho, rx_, ry_);
    Array pdiag = Array::Zero(g_.num_nodes());
    for (int j = 0; j < g_.cells_y(); ++j) {
      const int n0 = j * nx;
      const int c0 = j * cx;
      for (int i = 0; i < cx; ++i) {
        const int c = c0 + i;
        const double m = rx_[c] * rx_[c] + ry_[c] * ry_[c];
        const double f = m > 0.0 ? flux_coef_ * detail::pow_pos(m, 0.5 * (p - 2.0)) : 0.0;
        const double v = (p - 1.0) * f * stencil_;
        pdiag[n0 + i] += v;
        pdiag[n0 + i + 1] += v;
        pdiag[n0 + nx + i] += v;
        pdiag[n0 + nx + i + 1] += v;
        rx_[c] *= f;
        ry_[c] *= f;
      }
    }
    divergence_adjoint_into(g_, rx_, ry_, w_, div_);
    out -= div_;
    diag += pdiag / w_;
  }

  const Array& weights() const { return w_; }

 private:
  GridSpec g_;
  const Params& P_;
  Array q_;  // |grad u|^2 per cell
  Array w_;
  Array bulk_diag_;
  double grad_coef_, well_coef_e_, well_coef_g_, well_coef_h_, flux_coef_, stencil_;
  mutable Array rx_, ry_, div_;
};

void project(const Array& ub, Array& rho) {
  rho = rho.min(ub).max(0.0);
}

// Componentwise KKT residual: activity is detected by exact equality, which
// the clamp projection produces.
double projected_gradient_norm(const Array& rho, const Array& grd, const Array& ub,
                               const Array& w) {
  double acc = 0.0;
  for (Eigen::Index n = 0; n < rho.size(); ++n) {
    const bool up = rho[n] == ub[n];
    const bool lo = rho[n] == 0.0;
    double gp;
    if (up && lo)
      gp = 0.0;
    else if (up)
      gp = std::max(grd[n], 0.0);
    else if (lo)
      gp = std::min(grd[n], 0.0);
    else
      gp = grd[n];
    acc += w[n] * gp * gp;
  }
  return std::sqrt(acc);
}

}  // namespace

double rho_gradient_scale(const Params& P, const GridSpec& g) {
  return P.alpha * (P.p - 1.0) / P.epsilon * std::sqrt(g.lx * g.ly);
}

std::pair<PhaseField, SolveReport> solve_rho_step(const Field& u,
                                                  const PhaseField& rho_bar,
                                                  const Params& P, double pg_tol,
                                                  int max_iter, const Field* start) {
  if (!(u.grid == rho_bar.grid) || !(u.grid == P.g.grid))
    throw std::invalid_argument("solve_rho_step: u, rho_bar and g must share one grid");
  if (!(pg_tol > 0.0)) throw std::invalid_argument("solve_rho_step: pg_tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("solve_rho_step: max_iter must be >= 1");
  if (start && !(start->grid == u.grid))
    throw std::invalid_argument("solve_rho_step: start lives on a different grid");

  const GridSpec& g = u.grid;
  const RhoObjective obj(u, P);
  const Array& w = obj.weights();
  const Array& ub = rho_bar.values;
  const double tol = pg_tol * rho_gradient_scale(P, g);

  Array rho = start ? start->values : ub;
  project(ub, rho);

  Array grd(g.num_nodes()), diag(g.num_nodes());
  obj.gradient(rho, grd, diag);

  SolveReport rep;
  if (projected_gradient_norm(rho, grd, ub, w) <= tol) {
    rep.converged = true;
    rep.relative_residual =
        projected_gradient_norm(rho, grd, ub, w) / rho_gradient_scale(P, g);
    return {PhaseField(g, std::move(rho)), rep};
  }

  double f_cur = obj.value(rho);
  double t = 1.0;  // natural scale for the curvature-scaled direction

  Array dir(g.num_nodes()), cand(g.num_nodes()), diff(g.num_nodes());
  Array grd_new(g.num_nodes()), diag_new(g.num_nodes());
  bool stalled = false;

  for (int k = 0; k < max_iter && !stalled; ++k) {
    const double dfloor = 1e-12 * std::max(1.0, diag.maxCoeff());
    dir = grd / (diag + dfloor);

    // Monotone backtracking from the BB trial step. The epsilon term keeps
    // the sufficient-decrease test meaningful once the true decrease falls
    // below the floating-point resolution of the objective value.
    double f_cand = f_cur;
    bool accepted = false;
    for (int bt = 0; bt < 80; ++bt) {
      cand = rho - t * dir;
      project(ub, cand);
      diff = cand - rho;
      const double dec_lin = (w * grd * diff).sum();
      if (!(dec_lin < 0.0)) {
        stalled = true;  // projection admits no descent direction
        break;
      }
      f_cand = obj.value(cand);
      const double fuzz = 4.0 * std::numeric_limits<double>::epsilon() *
                          (std::abs(f_cur) + std::abs(f_cand));
      if (f_cand <= f_cur + kArmijo * dec_lin + fuzz) {
        accepted = true;
        break;
      }
      t *= kBacktrack;
    }
    if (!accepted) {
      stalled = true;
      break;
    }

    obj.gradient(cand, grd_new, diag_new);
    // BB step length in the metric of the scaling diagonal.
    const Array s = cand - rho;
    const Array y = grd_new - grd;
    const double sy = (w * s * y).sum();
    const double sDs = (w * s * (diag + dfloor) * s).sum();
    if (sy > 0.0) t = std::min(std::max(sDs / sy, kBBMin), kBBMax);

    rho = cand;
    grd.swap(grd_new);
    diag.swap(diag_new);
    f_cur = f_cand;
    rep.iterations = k + 1;

    if (projected_gradient_norm(rho, grd, ub, w) <= tol) {
      rep.converged = true;
      break;
    }
  }

  const double gp = projected_gradient_norm(rho, grd, ub, w);
  rep.relative_residual = gp / rho_gradient_scale(P, g);
  rep.converged = gp <= tol;
  if (!rep.converged)
    throw SolverError("solve_rho_step: projected gradient did not reach tolerance " +
                          std::to_string(pg_tol) + " within " +
                          std::to_string(max_iter) + " iterations",
                      rep);
  return {PhaseField(g, std::move(rho)), rep};
}

PhaseField init_rho(const Field& u0, const Params& P, double pg_tol, int max_iter) {
  const PhaseField ones = PhaseField::constant(u0.grid, 1.0);
  return solve_rho_step(u0, ones, P, pg_tol, max_iter).first;
}

}  // namespace atflow
