#include "atflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace atflow {

double slope(const Field& u, const PhaseField& rho, const Params& P) {
  return mass_norm(grad_u(u, rho, P));
}

AuditReport audit_step(const Field& u_prev, const PhaseField& rho_prev,
                       const Field& u_next, const PhaseField& rho_next,
                       double delta, const Params& P) {
  AuditReport rep;

  // Irreversibility is exact: the projection in the rho step is the last
  // arithmetic act, so no tolerance is granted here.
  double worst = 0.0;
  for (Eigen::Index n = 0; n < rho_next.values.size(); ++n)
    worst = std::max(worst, rho_next.values[n] - rho_prev.values[n]);
  rep.rho_monotone.violation = std::max(0.0, worst);
  rep.rho_monotone.ok = rep.rho_monotone.violation == 0.0;

  const double bound = std::max(u_prev.values.abs().maxCoeff(),
                                P.g.values.abs().maxCoeff());
  const double u_tol = 1e-9 * std::max(1.0, bound);
  rep.max_principle.violation =
      std::max(0.0, u_next.values.abs().maxCoeff() - bound);
  rep.max_principle.ok = rep.max_principle.violation <= u_tol;

  const EnergyBreakdown e_prev = total_energy(u_prev, rho_prev, P);
  const EnergyBreakdown e_next = total_energy(u_next, rho_next, P);
  const double scale = std::max(1.0, e_prev.total);
  const double tol = 1e-9 * scale;

  const double prox =
      0.5 / delta * std::pow(mass_norm(Field(u_next.grid, u_next.values - u_prev.values)), 2);
  rep.energy_inequality.violation = std::max(0.0, e_next.total + prox - e_prev.total);
  rep.energy_inequality.ok = rep.energy_inequality.violation <= tol;

  const double s_prev = surface_energy(rho_prev, P);
  const double s_next = surface_energy(rho_next, P);
  rep.surface_monotone.violation = std::max(0.0, s_prev - s_next);
  rep.surface_monotone.ok = rep.surface_monotone.violation <= tol;

  const double b_prev = e_prev.bulk;
  const double b_next = e_next.bulk;
  rep.bulk_monotone.violation = std::max(0.0, b_next - b_prev);
  rep.bulk_monotone.ok = rep.bulk_monotone.violation <= tol;

  return rep;
}

namespace {

struct Pt {
  double x, y;
};

double seg_len(const Pt& a, const Pt& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Linear interpolation of the level-s crossing between two corner samples.
Pt cross(const Pt& pa, double va, const Pt& pb, double vb, double s) {
  const double t = (s - va) / (vb - va);
  return {pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)};
}

}  // namespace

double level_set_perimeter(const PhaseField& rho, double s) {
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("level_set_perimeter: threshold must lie in (0,1)");
  const GridSpec& g = rho.grid;
  const Array rbar = cell_means(g, rho.values);
  const int cx = g.cells_x();
  const int cy = g.cells_y();
  if (cx < 2 || cy < 2) return 0.0;

  const double hx = g.hx();
  const double hy = g.hy();
  double total = 0.0;

  // March over the dual grid of cell centers. Corners of a dual cell (i,j):
  //   0:(i,j)  1:(i+1,j)  2:(i+1,j+1)  3:(i,j+1), counterclockwise.
  for (int j = 0; j + 1 < cy; ++j) {
    for (int i = 0; i + 1 < cx; ++i) {
      const double v0 = rbar[g.cell(i, j)];
      const double v1 = rbar[g.cell(i + 1, j)];
      const double v2 = rbar[g.cell(i + 1, j + 1)];
      const double v3 = rbar[g.cell(i, j + 1)];
      const int mask = (v0 < s ? 1 : 0) | (v1 < s ? 2 : 0) | (v2 < s ? 4 : 0) |
                       (v3 < s ? 8 : 0);
      if (mask == 0 || mask == 15) continue;

      const Pt p0{(i + 0.5) * hx, (j + 0.5) * hy};
      const Pt p1{(i + 1.5) * hx, (j + 0.5) * hy};
      const Pt p2{(i + 1.5) * hx, (j + 1.5) * hy};
      const Pt p3{(i + 0.5) * hx, (j + 1.5) * hy};

      // Edge crossings: e01 bottom, e12 right, e23 top, e30 left.
      auto e01 = [&] { return cross(p0, v0, p1, v1, s); };
      auto e12 = [&] { return cross(p1, v1, p2, v2, s); };
      auto e23 = [&] { return cross(p2, v2, p3, v3, s); };
      auto e30 = [&] { return cross(p3, v3, p0, v0, s); };

      switch (mask) {
        case 1:
        case 14:
          total += seg_len(e30(), e01());
          break;
        case 2:
        case 13:
          total += seg_len(e01(), e12());
          break;
        case 4:
        case 11:
          total += seg_len(e12(), e23());
          break;
        case 8:
        case 7:
          total += seg_len(e23(), e30());
          break;
        case 3:
        case 12:
          total += seg_len(e30(), e12());
          break;
        case 6:
        case 9:
          total += seg_len(e01(), e23());
          break;
        case 5:
        case 10: {
          // Saddle: disambiguate with the cell-center average.
          const double center = 0.25 * (v0 + v1 + v2 + v3);
          const bool center_inside = center < s;
          const bool corners_inside = (mask == 5);  // corners 0 and 2 below s
          if (center_inside == corners_inside) {
            total += seg_len(e30(), e23());
            total += seg_len(e01(), e12());
          } else {
            total += seg_len(e30(), e01());
            total += seg_len(e12(), e23());
          }
          break;
        }
        default:
          break;
      }
    }
  }
  return total;
}

CrackEstimate extract_crack(const PhaseField& rho, const Params& P, double delta1,
                            double delta2, int n_thresholds) {
  if (!(delta1 > 0.0 && delta1 < delta2 && delta2 < 1.0))
    throw std::invalid_argument("extract_crack: need 0 < delta1 < delta2 < 1");
  if (n_thresholds < 1)
    throw std::invalid_argument("extract_crack: n_thresholds must be >= 1");

  CrackEstimate best;
  bool first = true;
  for (int k = 1; k <= n_thresholds; ++k) {
    const double s = delta1 + k * (delta2 - delta1) / (n_thresholds + 1);
    const double per = level_set_perimeter(rho, s);
    if (first || per < best.perimeter) {
      best.threshold = s;
      best.perimeter = per;
      first = false;
    }
  }
  best.diffuse_length = diffuse_crack_length(rho, P);
  return best;
}

}  // namespace atflow
