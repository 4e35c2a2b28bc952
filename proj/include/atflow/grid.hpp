#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace atflow {

using Array = Eigen::ArrayXd;

/// Uniform node grid on the rectangle [0,lx] x [0,ly].
///
/// Nodes are stored row-major: node(i,j) = j*nx + i with i the x index.
/// Cells are the (nx-1)*(ny-1) rectangles between nodes, also row-major.
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double lx = 0.0;
  double ly = 0.0;

  GridSpec() = default;
  GridSpec(int nx_, int ny_, double lx_, double ly_);

  double hx() const { return lx / (nx - 1); }
  double hy() const { return ly / (ny - 1); }
  double cell_area() const { return hx() * hy(); }

  int num_nodes() const { return nx * ny; }
  int cells_x() const { return nx - 1; }
  int cells_y() const { return ny - 1; }
  int num_cells() const { return (nx - 1) * (ny - 1); }

  int node(int i, int j) const { return j * nx + i; }
  int cell(int i, int j) const { return j * (nx - 1) + i; }
  double x(int i) const { return i * hx(); }
  double y(int j) const { return j * hy(); }

  bool operator==(const GridSpec&) const = default;
};

/// Node-indexed scalar field. Construction checks size and finiteness.
struct Field {
  GridSpec grid;
  Array values;

  Field() = default;
  explicit Field(const GridSpec& g, double fill = 0.0)
      : grid(g), values(Array::Constant(g.num_nodes(), fill)) {}
  Field(const GridSpec& g, Array v);

  double& operator()(int i, int j) { return values[grid.node(i, j)]; }
  double operator()(int i, int j) const { return values[grid.node(i, j)]; }
};

/// Node-indexed field constrained to [0,1]. Construction validates the range.
struct PhaseField {
  GridSpec grid;
  Array values;

  PhaseField() = default;
  PhaseField(const GridSpec& g, Array v);

  static PhaseField constant(const GridSpec& g, double c);

  Field as_field() const { return Field(grid, values); }
  double operator()(int i, int j) const { return values[grid.node(i, j)]; }
};

/// Cell-indexed vector field (one (gx,gy) pair per cell); produced by gradient().
struct CellVectorField {
  GridSpec grid;
  Array gx;
  Array gy;

  CellVectorField() = default;
  explicit CellVectorField(const GridSpec& g)
      : grid(g), gx(Array::Zero(g.num_cells())), gy(Array::Zero(g.num_cells())) {}
};

// In-place kernels used by the solvers; the Field-level wrappers below are the
// public surface. All arrays must be pre-sized.
void gradient_into(const GridSpec& g, const Array& f, Array& gx, Array& gy);
void divergence_adjoint_into(const GridSpec& g, const Array& gx, const Array& gy,
                             const Array& weights, Array& out);

/// One-point-quadrature bilinear cell gradient: per cell, gx is the average of
/// the two x-edge forward differences over hx (and likewise gy). Linear in f.
CellVectorField gradient(const Field& f);

/// Exact negative adjoint of gradient() in the lumped-mass / cell-area pairing:
/// <divergence_adjoint(v), f>_M = -<v, gradient(f)>_cells for every f.
/// The homogeneous Neumann condition is natural (no boundary flux term).
Field divergence_adjoint(const CellVectorField& v);

/// Diagonal (lumped) mass weights: hx*hy scaled by 1/2 per boundary axis and
/// 1/4 at corners. Their sum is exactly lx*ly.
Array lumped_weights(const GridSpec& g);

double mass_norm(const Field& f);
double mass_inner(const Field& a, const Field& b);

/// Sum of per-cell scalars times the cell area.
double cell_integral(const GridSpec& g, const Array& cell_scalars);

/// Per-cell mean of the four node values.
Array cell_means(const GridSpec& g, const Array& node_values);

}  // namespace atflow
