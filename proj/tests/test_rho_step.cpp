#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atflow/rho_step.hpp"
#include "test_support.hpp"

using namespace atflow;
using atflow::testing::Rng;

namespace {

Field affine_field(const GridSpec& g, double ax, double ay) {
  Field f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) f(i, j) = ax * g.x(i) + ay * g.y(j);
  return f;
}

}  // namespace

TEST_CASE("flat u relaxes rho to the obstacle") {
  const GridSpec g(10, 10, 1.0, 1.0);
  const Params P = make_params(0.1, 1e-2, 4.0, 1.0, Field(g, 0.0));
  const Field u(g, 0.5);

  auto [r1, rep1] = solve_rho_step(u, PhaseField::constant(g, 1.0), P, 1e-10, 5000);
  CHECK((r1.values - 1.0).abs().maxCoeff() == 0.0);
  CHECK(rep1.iterations == 0);

  auto [r2, rep2] = solve_rho_step(u, PhaseField::constant(g, 0.5), P, 1e-10, 5000);
  CHECK((r2.values - 0.5).abs().maxCoeff() == 0.0);
}

TEST_CASE("affine u drives rho to the scalar stationarity root") {
  const GridSpec g(24, 24, 1.0, 1.0);
  const Params P = make_params(0.08, 1e-2, 4.0, 0.0, Field(g, 0.0));
  const double ax = 1.3, ay = -0.4;
  const double c = ax * ax + ay * ay;
  const Field u = affine_field(g, ax, ay);
  const double root = testing::constant_rho_root(c, P);

  auto [rho, rep] = solve_rho_step(u, PhaseField::constant(g, 1.0), P, 1e-11, 20000);
  CHECK((rho.values - root).abs().maxCoeff() <= 1e-7);
}

TEST_CASE("init_rho spot behavior") {
  const GridSpec g(16, 16, 1.0, 1.0);
  const Params P = make_params(0.1, 1e-2, 3.0, 2.0, Field(g, 0.2));

  const PhaseField flat = init_rho(Field(g, 0.2), P, 1e-10);
  CHECK((flat.values - 1.0).abs().maxCoeff() == 0.0);

  const Field u = affine_field(g, 0.9, 0.2);
  const double c = 0.9 * 0.9 + 0.2 * 0.2;
  const PhaseField rho = init_rho(u, P, 1e-11);
  CHECK((rho.values - testing::constant_rho_root(c, P)).abs().maxCoeff() <= 1e-7);

  // Minimality against the intact competitor.
  const double e_star = total_energy(u, rho, P).total;
  const double e_one = total_energy(u, PhaseField::constant(g, 1.0), P).total;
  CHECK(e_star <= e_one + 1e-12 * std::max(1.0, e_one));
}

TEST_CASE("feasibility is exact and KKT holds at the solution") {
  const GridSpec g(14, 11, 1.0, 0.9);
  Rng rng(61);
  const Params P = make_params(0.07, 1e-2, 3.0, 1.0,
                               Field(g, rng.array(g.num_nodes(), 0.0, 1.0)));
  const Field u(g, testing::smooth_random_field(g, rng) * 2.0);
  const PhaseField ub(g, rng.array(g.num_nodes(), 0.3, 1.0));
  const double pg_tol = 1e-10;

  auto [rho, rep] = solve_rho_step(u, ub, P, pg_tol, 20000);
  CHECK((rho.values >= 0.0).all());
  CHECK((rho.values <= ub.values).all());
  CHECK(rep.converged);

  const Field grd = grad_rho(u, rho, P);
  const double tol = pg_tol * rho_gradient_scale(P, g);
  // Looser than the mass-norm stop, but componentwise.
  const double node_tol = tol / std::sqrt(lumped_weights(g).minCoeff());
  for (int n = 0; n < g.num_nodes(); ++n) {
    const bool upper = rho.values[n] == ub.values[n];
    const bool lower = rho.values[n] == 0.0;
    if (upper && lower) continue;
    if (upper) {
      CHECK(grd.values[n] <= node_tol);
    } else if (lower) {
      CHECK(grd.values[n] >= -node_tol);
    } else {
      CHECK(std::abs(grd.values[n]) <= node_tol);
    }
  }
}

TEST_CASE("solver lands on the same minimizer from different starts") {
  const GridSpec g(12, 12, 1.0, 1.0);
  Rng rng(2025);
  const Params P = make_params(0.06, 1e-2, 4.0, 1.0, Field(g, 0.0));
  const Field u(g, testing::smooth_random_field(g, rng) * 3.0);
  const PhaseField ub(g, rng.array(g.num_nodes(), 0.5, 1.0));
  const double pg_tol = 1e-10;

  const Field start_a = ub.as_field();
  const Field start_b(g, 0.5 * ub.values);
  auto [ra, rep_a] = solve_rho_step(u, ub, P, pg_tol, 40000, &start_a);
  auto [rb, rep_b] = solve_rho_step(u, ub, P, pg_tol, 40000, &start_b);
  const double dist = mass_norm(Field(g, ra.values - rb.values));
  CHECK(dist <= 10.0 * pg_tol * rho_gradient_scale(P, g));
}

TEST_CASE("energy descends against the obstacle state") {
  const GridSpec g(10, 10, 1.0, 1.0);
  Rng rng(17);
  const Params P = make_params(0.09, 1e-2, 3.0, 2.0,
                               Field(g, rng.array(g.num_nodes(), 0.0, 1.0)));
  const Field u(g, rng.array(g.num_nodes(), -1.0, 1.0));
  const PhaseField ub(g, rng.array(g.num_nodes(), 0.2, 1.0));
  auto [rho, rep] = solve_rho_step(u, ub, P, 1e-9, 20000);
  CHECK(total_energy(u, rho, P).total <=
        total_energy(u, ub, P).total + 1e-12 * std::max(1.0, total_energy(u, ub, P).total));
}

TEST_CASE("validation and iteration-cap errors") {
  const GridSpec g(8, 8, 1.0, 1.0);
  const Params P = make_params(0.1, 1e-2, 4.0, 1.0, Field(g, 0.0));
  Rng rng(12);
  const Field u(g, testing::smooth_random_field(g, rng) * 4.0);
  const PhaseField ub = PhaseField::constant(g, 1.0);

  // Out-of-range obstacle cannot even be constructed.
  CHECK_THROWS_AS(PhaseField(g, Array::Constant(g.num_nodes(), 1.2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_rho_step(u, ub, P, 0.0, 100), std::invalid_argument);
  try {
    solve_rho_step(u, ub, P, 1e-13, 1);
    FAIL("expected SolverError");
  } catch (const SolverError& err) {
    CHECK_FALSE(err.report.converged);
  }
}
