#include "atflow/grid.hpp"

#include <cmath>

namespace atflow {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

GridSpec::GridSpec(int nx_, int ny_, double lx_, double ly_)
    : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
  require(nx >= 2, "GridSpec: nx must be >= 2");
  require(ny >= 2, "GridSpec: ny must be >= 2");
  require(std::isfinite(lx) && lx > 0.0, "GridSpec: lx must be positive and finite");
  require(std::isfinite(ly) && ly > 0.0, "GridSpec: ly must be positive and finite");
}

Field::Field(const GridSpec& g, Array v) : grid(g), values(std::move(v)) {
  require(values.size() == grid.num_nodes(),
          "Field: values size does not match grid (" + std::to_string(values.size()) +
              " vs " + std::to_string(grid.num_nodes()) + ")");
  require(values.allFinite(), "Field: values must be finite");
}

PhaseField::PhaseField(const GridSpec& g, Array v) : grid(g), values(std::move(v)) {
  require(values.size() == grid.num_nodes(),
          "PhaseField: values size does not match grid");
  require(values.allFinite(), "PhaseField: values must be finite");
  require((values >= 0.0).all() && (values <= 1.0).all(),
          "PhaseField: values must lie in [0,1]");
}

PhaseField PhaseField::constant(const GridSpec& g, double c) {
  return PhaseField(g, Array::Constant(g.num_nodes(), c));
}

void gradient_into(const GridSpec& g, const Array& f, Array& gx, Array& gy) {
  const int nx = g.nx;
  const int cx = g.cells_x();
  const int cy = g.cells_y();
  const double ihx = 0.5 / g.hx();
  const double ihy = 0.5 / g.hy();
  for (int j = 0; j < cy; ++j) {
    const int n0 = j * nx;
    const int c0 = j * cx;
    for (int i = 0; i < cx; ++i) {
      const double f00 = f[n0 + i];
      const double f10 = f[n0 + i + 1];
      const double f01 = f[n0 + nx + i];
      const double f11 = f[n0 + nx + i + 1];
      gx[c0 + i] = ((f10 - f00) + (f11 - f01)) * ihx;
      gy[c0 + i] = ((f01 - f00) + (f11 - f10)) * ihy;
    }
  }
}

void divergence_adjoint_into(const GridSpec& g, const Array& gx, const Array& gy,
                             const Array& weights, Array& out) {
  const int nx = g.nx;
  const int cx = g.cells_x();
  const int cy = g.cells_y();
  const double area = g.cell_area();
  const double sx = 0.5 * area / g.hx();
  const double sy = 0.5 * area / g.hy();
  out.setZero();
  for (int j = 0; j < cy; ++j) {
    const int n0 = j * nx;
    const int c0 = j * cx;
    for (int i = 0; i < cx; ++i) {
      const double ax = sx * gx[c0 + i];
      const double ay = sy * gy[c0 + i];
      out[n0 + i] += -ax - ay;
      out[n0 + i + 1] += ax - ay;
      out[n0 + nx + i] += -ax + ay;
      out[n0 + nx + i + 1] += ax + ay;
    }
  }
  out = -out / weights;
}

CellVectorField gradient(const Field& f) {
  if (f.values.size() != f.grid.num_nodes())
    throw std::invalid_argument("gradient: field inconsistent with its grid");
  CellVectorField v(f.grid);
  gradient_into(f.grid, f.values, v.gx, v.gy);
  return v;
}

Field divergence_adjoint(const CellVectorField& v) {
  if (v.gx.size() != v.grid.num_cells() || v.gy.size() != v.grid.num_cells())
    throw std::invalid_argument("divergence_adjoint: cell field inconsistent with its grid");
  const Array w = lumped_weights(v.grid);
  Array out(v.grid.num_nodes());
  divergence_adjoint_into(v.grid, v.gx, v.gy, w, out);
  return Field(v.grid, std::move(out));
}

Array lumped_weights(const GridSpec& g) {
  Array w(g.num_nodes());
  const double area = g.cell_area();
  for (int j = 0; j < g.ny; ++j) {
    const double cj = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
    for (int i = 0; i < g.nx; ++i) {
      const double ci = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
      w[g.node(i, j)] = area * ci * cj;
    }
  }
  return w;
}

double mass_norm(const Field& f) {
  const Array w = lumped_weights(f.grid);
  return std::sqrt((w * f.values.square()).sum());
}

double mass_inner(const Field& a, const Field& b) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument("mass_inner: fields live on different grids");
  const Array w = lumped_weights(a.grid);
  return (w * a.values * b.values).sum();
}

double cell_integral(const GridSpec& g, const Array& cell_scalars) {
  if (cell_scalars.size() != g.num_cells())
    throw std::invalid_argument("cell_integral: per-cell data inconsistent with grid");
  return g.cell_area() * cell_scalars.sum();
}

Array cell_means(const GridSpec& g, const Array& node_values) {
  if (node_values.size() != g.num_nodes())
    throw std::invalid_argument("cell_means: node data inconsistent with grid");
  const int nx = g.nx;
  const int cx = g.cells_x();
  const int cy = g.cells_y();
  Array m(g.num_cells());
  for (int j = 0; j < cy; ++j) {
    const int n0 = j * nx;
    const int c0 = j * cx;
    for (int i = 0; i < cx; ++i) {
      m[c0 + i] = 0.25 * (node_values[n0 + i] + node_values[n0 + i + 1] +
                          node_values[n0 + nx + i] + node_values[n0 + nx + i + 1]);
    }
  }
  return m;
}

}  // namespace atflow
