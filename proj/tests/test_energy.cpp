#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atflow/energy.hpp"
#include "test_support.hpp"

using namespace atflow;
using atflow::testing::Rng;

namespace {

// Frozen with a 40-digit arbitrary-precision evaluation of (p/2)^{p/(p-1)}.
constexpr double kAlphaP4 = 2.5198420997897463295;
constexpr double kAlphaP3 = 1.8371173070873835736;

Params default_params(const GridSpec& g, double eps = 0.1, double p = 4.0,
                      double beta = 1.0, double eta = 1e-2) {
  return make_params(eps, eta, p, beta, Field(g, 0.0));
}

Field xy_field(const GridSpec& g) {
  Field f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) f(i, j) = g.x(i) * g.y(j);
  return f;
}

Field x_field(const GridSpec& g) {
  Field f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) f(i, j) = g.x(i);
  return f;
}

// Central finite difference of the energy along phi, against the
// mass-represented gradient.
void check_grad_u_fd(const Field& u, const PhaseField& rho, const Params& P,
                     const Field& phi) {
  const double s = 1e-5;
  const Field up(u.grid, u.values + s * phi.values);
  const Field um(u.grid, u.values - s * phi.values);
  const double fd =
      (total_energy(up, rho, P).total - total_energy(um, rho, P).total) / (2.0 * s);
  const double directional = mass_inner(grad_u(u, rho, P), phi);
  const double scale = std::max(1.0, std::abs(directional));
  CHECK(std::abs(fd - directional) <= 1e-6 * scale);
}

void check_grad_rho_fd(const Field& u, const PhaseField& rho, const Params& P,
                       const Field& phi) {
  const double s = 1e-5;
  const PhaseField rp(rho.grid, (rho.values + s * phi.values).min(1.0).max(0.0));
  const PhaseField rm(rho.grid, (rho.values - s * phi.values).min(1.0).max(0.0));
  // Keep the probe interior so the clamp above never actually bites.
  REQUIRE(((rho.values + s * phi.values) <= 1.0).all());
  REQUIRE(((rho.values - s * phi.values) >= 0.0).all());
  const double fd =
      (total_energy(u, rp, P).total - total_energy(u, rm, P).total) / (2.0 * s);
  const double directional = mass_inner(grad_rho(u, rho, P), phi);
  const double scale = std::max(1.0, std::abs(directional));
  CHECK(std::abs(fd - directional) <= 1e-6 * scale);
}

}  // namespace

TEST_CASE("conjugate exponent and normalization formula") {
  CHECK(p_conjugate(2.0) == doctest::Approx(2.0));
  CHECK(at_normalization(2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(at_normalization(4.0) - kAlphaP4) <= 1e-12);
  CHECK(std::abs(at_normalization(3.0) - kAlphaP3) <= 1e-12);
  CHECK(p_conjugate(4.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("make_params validates every range, naming the bound") {
  const GridSpec g(4, 4, 1.0, 1.0);
  const Field zero(g, 0.0);
  CHECK_THROWS_WITH_AS(make_params(-1.0, 0.5, 4.0, 1.0, zero),
                       doctest::Contains("epsilon"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_params(0.1, 1.5, 4.0, 1.0, zero),
                       doctest::Contains("eta"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_params(0.1, 0.5, 2.0, 1.0, zero),
                       doctest::Contains("p"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_params(0.1, 0.5, 4.0, -1.0, zero),
                       doctest::Contains("beta"), std::invalid_argument);
  const Params P = make_params(0.1, 0.5, 4.0, 1.0, zero);
  CHECK(P.alpha == doctest::Approx(kAlphaP4).epsilon(1e-15));
}

TEST_CASE("energy vanishes on constant data with intact phase") {
  const GridSpec g(8, 8, 1.0, 1.0);
  Params P = make_params(0.1, 1e-2, 4.0, 2.0, Field(g, 0.7));
  const Field u(g, 0.7);
  const EnergyBreakdown e = total_energy(u, PhaseField::constant(g, 1.0), P);
  CHECK(e.total == 0.0);
  CHECK(e.bulk == 0.0);
  CHECK(e.surface == 0.0);
  CHECK(e.fidelity == 0.0);
}

TEST_CASE("energy at rho = 1 reduces to the crack-free formula") {
  // u = x, g = 0, beta = 2, eta = 0.01 on the unit square:
  // (1+eta)/2 * int |grad u|^2 + beta/2 * int x^2 = 0.505 + 1/3.
  const GridSpec g(129, 129, 1.0, 1.0);
  const Params P = make_params(0.1, 1e-2, 4.0, 2.0, Field(g, 0.0));
  const EnergyBreakdown e =
      total_energy(x_field(g), PhaseField::constant(g, 1.0), P);
  CHECK(std::abs(e.total - (0.505 + 1.0 / 3.0)) <= 1e-3);
  CHECK(e.surface == 0.0);
}

TEST_CASE("energy at rho = 0 with u = g is the constant well term") {
  const GridSpec g(17, 13, 1.5, 0.5);
  const Params P = make_params(0.07, 1e-2, 3.0, 5.0, Field(g, 0.4));
  const EnergyBreakdown e =
      total_energy(Field(g, 0.4), PhaseField::constant(g, 0.0), P);
  const double expected = P.alpha * g.lx * g.ly / (P.p_prime * P.epsilon);
  CHECK(e.total == doctest::Approx(expected).epsilon(1e-12));
  CHECK(e.bulk == 0.0);
}

TEST_CASE("total = bulk + surface and all parts nonnegative") {
  const GridSpec g(12, 10, 1.0, 1.0);
  Rng rng(5);
  const Params P = make_params(0.08, 1e-2, 3.5, 7.0,
                               Field(g, rng.array(g.num_nodes(), 0.0, 1.0)));
  const Field u(g, rng.array(g.num_nodes(), -1.0, 1.0));
  const PhaseField rho(g, rng.array(g.num_nodes(), 0.0, 1.0));
  const EnergyBreakdown e = total_energy(u, rho, P);
  CHECK(e.total == e.bulk + e.surface);
  CHECK(e.bulk >= e.fidelity);
  CHECK(e.surface >= 0.0);
  CHECK(e.fidelity >= 0.0);
}

TEST_CASE("grad_u vanishes on constant u = g") {
  const GridSpec g(9, 9, 1.0, 1.0);
  const Params P = make_params(0.1, 1e-2, 4.0, 3.0, Field(g, 1.2));
  const Field r = grad_u(Field(g, 1.2), PhaseField::constant(g, 0.5), P);
  CHECK(r.values.abs().maxCoeff() == 0.0);
}

TEST_CASE("grad_u matches central finite differences") {
  const GridSpec g(8, 7, 1.0, 1.2);
  Rng rng(99);
  const Params P = make_params(0.09, 1e-2, 4.0, 2.5,
                               Field(g, rng.array(g.num_nodes(), 0.0, 1.0)));
  for (int trial = 0; trial < 10; ++trial) {
    const Field u(g, rng.array(g.num_nodes(), -1.0, 1.0));
    const PhaseField rho(g, rng.array(g.num_nodes(), 0.0, 1.0));
    const Field phi(g, rng.array(g.num_nodes(), -1.0, 1.0));
    check_grad_u_fd(u, rho, P, phi);
  }
}

TEST_CASE("grad_u with intact phase and harmonic u is the fidelity term inside") {
  const GridSpec g(65, 65, 1.0, 1.0);
  const double beta = 3.0;
  const Params P = make_params(0.1, 1e-2, 4.0, beta, Field(g, 0.0));
  const Field u = xy_field(g);
  const Field r = grad_u(u, PhaseField::constant(g, 1.0), P);
  double worst = 0.0;
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i)
      worst = std::max(worst, std::abs(r(i, j) - beta * u(i, j)));
  CHECK(worst <= 1e-9);
}

TEST_CASE("grad_rho vanishes at intact phase with flat u") {
  const GridSpec g(10, 10, 1.0, 1.0);
  const Params P = make_params(0.1, 1e-2, 4.0, 1.0, Field(g, 0.0));
  const Field r = grad_rho(Field(g, 2.0), PhaseField::constant(g, 1.0), P);
  CHECK(r.values.abs().maxCoeff() == 0.0);
}

TEST_CASE("grad_rho matches central finite differences") {
  const GridSpec g(7, 8, 1.1, 0.9);
  Rng rng(321);
  const Params P = make_params(0.12, 1e-2, 3.0, 4.0,
                               Field(g, rng.array(g.num_nodes(), 0.0, 1.0)));
  for (int trial = 0; trial < 10; ++trial) {
    const Field u(g, rng.array(g.num_nodes(), -1.0, 1.0));
    const PhaseField rho(g, rng.array(g.num_nodes(), 0.1, 0.9));
    const Field phi(g, rng.array(g.num_nodes(), -1.0, 1.0));
    check_grad_rho_fd(u, rho, P, phi);
  }
}

TEST_CASE("grad_rho at constant rho with affine u is the scalar balance") {
  const GridSpec g(33, 33, 1.0, 1.0);
  const Params P = make_params(0.1, 1e-2, 4.0, 0.0, Field(g, 0.0));
  const double r = 0.6;
  const Field grad = grad_rho(x_field(g), PhaseField::constant(g, r), P);
  // |grad u|^2 = 1, grad rho = 0: interior value is
  // r - alpha (p-1)/eps (1-r)^{p-1}.
  const double expected =
      r - P.alpha * (P.p - 1.0) / P.epsilon * std::pow(1.0 - r, P.p - 1.0);
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i)
      CHECK(grad(i, j) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("diffuse crack length spot values") {
  const GridSpec g(10, 10, 1.0, 1.0);
  const Params P = make_params(0.1, 1e-2, 4.0, 1.0, Field(g, 0.0));
  CHECK(diffuse_crack_length(PhaseField::constant(g, 1.0), P) == 0.0);

  // 1D ramp rho(x) = x, constant in y: (p/2) int_0^1 (1-x)^{p-1} dx = 1/2.
  const GridSpec ramp_grid(257, 3, 1.0, 1.0);
  const Params P2 = make_params(0.1, 1e-2, 4.0, 1.0, Field(ramp_grid, 0.0));
  Field ramp(ramp_grid);
  for (int j = 0; j < ramp_grid.ny; ++j)
    for (int i = 0; i < ramp_grid.nx; ++i) ramp(i, j) = ramp_grid.x(i);
  const double L = diffuse_crack_length(PhaseField(ramp_grid, ramp.values), P2);
  CHECK(std::abs(L - 0.5) <= 1e-3);
}

TEST_CASE("surface energy dominates the diffuse crack length") {
  const GridSpec g(24, 18, 1.0, 1.0);
  Rng rng(2024);
  const Params P = make_params(0.05, 1e-2, 3.0, 1.0, Field(g, 0.0));
  for (int trial = 0; trial < 50; ++trial) {
    const PhaseField rho(g, testing::smooth_random_field(g, rng, 0.0));
    CHECK(surface_energy(rho, P) - diffuse_crack_length(rho, P) >= -1e-12);
  }
}

TEST_CASE("surface well term is pointwise monotone in rho") {
  const GridSpec g(10, 10, 1.0, 1.0);
  Rng rng(31);
  const double p = 3.4;
  const Array r1 = rng.array(g.num_nodes(), 0.0, 0.7);
  const Array r2 = r1 + rng.array(g.num_nodes(), 0.0, 0.3).abs();
  for (Eigen::Index n = 0; n < r1.size(); ++n) {
    CHECK(std::pow(1.0 - r1[n], p) >= std::pow(1.0 - std::min(1.0, r2[n]), p));
  }
}

TEST_CASE("energy is convex in u and in rho") {
  const GridSpec g(9, 9, 1.0, 1.0);
  Rng rng(77);
  const Params P = make_params(0.1, 1e-2, 3.0, 2.0,
                               Field(g, rng.array(g.num_nodes(), 0.0, 1.0)));
  for (int trial = 0; trial < 5; ++trial) {
    const Field ua(g, rng.array(g.num_nodes(), -1.0, 1.0));
    const Field ub(g, rng.array(g.num_nodes(), -1.0, 1.0));
    const PhaseField ra(g, rng.array(g.num_nodes(), 0.0, 1.0));
    const PhaseField rb(g, rng.array(g.num_nodes(), 0.0, 1.0));
    for (double lam : {0.25, 0.5, 0.75}) {
      // in u, rho fixed
      const Field umix(g, lam * ua.values + (1 - lam) * ub.values);
      const double lhs_u = total_energy(umix, ra, P).total;
      const double rhs_u = lam * total_energy(ua, ra, P).total +
                           (1 - lam) * total_energy(ub, ra, P).total;
      CHECK(lhs_u <= rhs_u + 1e-10 * std::max(1.0, std::abs(rhs_u)));
      // in rho, u fixed
      const PhaseField rmix(g, lam * ra.values + (1 - lam) * rb.values);
      const double lhs_r = total_energy(ua, rmix, P).total;
      const double rhs_r = lam * total_energy(ua, ra, P).total +
                           (1 - lam) * total_energy(ua, rb, P).total;
      CHECK(lhs_r <= rhs_r + 1e-10 * std::max(1.0, std::abs(rhs_r)));
    }
  }
}

TEST_CASE("ms energy estimate spot values") {
  const GridSpec g(16, 16, 1.0, 1.0);
  const Params P = make_params(0.1, 1e-2, 4.0, 2.0, Field(g, 0.3));
  CHECK(ms_energy_estimate(Field(g, 0.3), PhaseField::constant(g, 1.0), P) == 0.0);

  // Intact phase: no excluded cell and zero crack term.
  const Field u = x_field(g);
  const CellVectorField v = gradient(u);
  const double grad_term =
      0.5 * g.cell_area() * (v.gx.square() + v.gy.square()).sum();
  const double fid = 0.5 * P.beta * std::pow(mass_norm(Field(g, u.values - 0.3)), 2);
  CHECK(ms_energy_estimate(u, PhaseField::constant(g, 1.0), P) ==
        doctest::Approx(grad_term + fid).epsilon(1e-13));
}

TEST_CASE("energy rejects mismatched grids") {
  const GridSpec g(6, 6, 1.0, 1.0);
  const GridSpec g2(7, 6, 1.0, 1.0);
  const Params P = make_params(0.1, 1e-2, 4.0, 1.0, Field(g, 0.0));
  CHECK_THROWS_AS(total_energy(Field(g2, 0.0), PhaseField::constant(g2, 1.0), P),
                  std::invalid_argument);
}
