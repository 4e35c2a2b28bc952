#include "atflow/flow.hpp"

#include "atflow/io.hpp"
#include "atflow/rho_step.hpp"

#include <cmath>

namespace atflow {

double TimePartition::time_at(std::size_t i) const {
  double t = 0.0;
  for (std::size_t j = 0; j < i && j < deltas.size(); ++j) t += deltas[j];
  return t;
}

std::vector<PartitionViolation> validate_partition(const TimePartition& p) {
  std::vector<PartitionViolation> out;
  for (std::size_t i = 0; i < p.deltas.size(); ++i) {
    if (!(p.deltas[i] > 0.0) || !std::isfinite(p.deltas[i]))
      out.push_back({i, "step size must be positive"});
  }
  for (std::size_t i = 0; i + 1 < p.deltas.size(); ++i) {
    if (!(p.deltas[i] > 0.0)) continue;  // already reported
    const double ratio = p.deltas[i + 1] / p.deltas[i];
    if (ratio > p.ratio_bound)
      out.push_back({i + 1, "step ratio " + std::to_string(ratio) +
                                " exceeds ratio_bound"});
  }
  return out;
}

namespace {

std::pair<FlowState, StepRecord> do_step(const FlowState& state, double delta,
                                         const Params& P, const Tolerances& tols,
                                         int max_sweeps) {
  if (!(delta > 0.0)) throw std::invalid_argument("step: delta must be > 0");

  const Field& u_anchor = state.u;
  const PhaseField& obstacle = state.rho;
  const double e_start = total_energy(u_anchor, obstacle, P).total;
  const double scale = std::max(1.0, std::abs(e_start));

  Field u = state.u;
  PhaseField rho = state.rho;
  long inner = 0;
  double obj_prev = e_start;  // objective value with zero proximal term

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    auto [u_new, rep_u] = solve_u_step(u_anchor, rho, delta, P, tols.cg_tol);
    inner += rep_u.iterations;
    const Field rho_start = rho.as_field();
    auto [rho_new, rep_r] = solve_rho_step(u_new, obstacle, P, tols.pg_tol,
                                           tols.pg_max_iter, &rho_start);
    inner += rep_r.iterations;
    u = std::move(u_new);
    rho = std::move(rho_new);

    const double prox =
        0.5 / delta *
        std::pow(mass_norm(Field(u.grid, u.values - u_anchor.values)), 2);
    const double obj = total_energy(u, rho, P).total + prox;
    if (obj_prev - obj <= tols.tol_alt * scale) break;
    obj_prev = obj;
  }

  FlowState next;
  next.step = state.step + 1;
  next.t = state.t + delta;
  next.u = std::move(u);
  next.rho = std::move(rho);

  StepRecord rec;
  rec.step = next.step;
  rec.t = next.t;
  rec.delta = delta;
  rec.energy = total_energy(next.u, next.rho, P);
  rec.velocity_norm =
      mass_norm(Field(next.u.grid, next.u.values - state.u.values)) / delta;
  rec.slope = slope(next.u, next.rho, P);
  rec.inner_iterations = inner;
  rec.audit = audit_step(state.u, state.rho, next.u, next.rho, delta, P);
  return {std::move(next), std::move(rec)};
}

}  // namespace

std::pair<FlowState, StepRecord> step_global(const FlowState& state, double delta,
                                             const Params& P, const Tolerances& tols) {
  return do_step(state, delta, P, tols, tols.max_sweeps);
}

std::pair<FlowState, StepRecord> step_alternate(const FlowState& state, double delta,
                                                const Params& P,
                                                const Tolerances& tols) {
  return do_step(state, delta, P, tols, 1);
}

Trace run_flow(const RunConfig& cfg, const Field& g, const Field& u0) {
  const GridSpec grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
  if (!(g.grid == grid) || !(u0.grid == grid))
    throw std::invalid_argument("run_flow: data fields do not match the configured grid");

  TimePartition partition{cfg.deltas, cfg.ratio_bound};
  const auto violations = validate_partition(partition);
  if (!violations.empty())
    throw std::invalid_argument("run_flow: invalid partition: " +
                                violations.front().what);

  const Params P = make_params(cfg.epsilon, cfg.eta, cfg.p, cfg.beta, g);
  const Tolerances tols{cfg.cg_tol, cfg.pg_tol, cfg.tol_alt, cfg.max_sweeps,
                        cfg.pg_max_iter};

  Trace trace;
  trace.grid = grid;
  trace.partition = partition;

  FlowState state;
  state.step = 0;
  state.t = 0.0;
  state.u = u0;
  state.rho = init_rho(u0, P, cfg.pg_tol, cfg.pg_max_iter);

  trace.initial_energy = total_energy(state.u, state.rho, P);
  trace.u0_linf = u0.values.abs().maxCoeff();
  trace.g_linf = g.values.abs().maxCoeff();
  if (cfg.snapshot_every > 0)
    trace.snapshots.push_back({0, state.u, state.rho.as_field()});

  const bool global = cfg.scheme == "global";
  for (std::size_t i = 0; i < partition.deltas.size(); ++i) {
    const double delta = partition.deltas[i];
    try {
      auto [next, rec] = global ? step_global(state, delta, P, tols)
                                : step_alternate(state, delta, P, tols);
      state = std::move(next);
      trace.records.push_back(std::move(rec));
    } catch (const SolverError& err) {
      trace.final_state = std::move(state);
      throw FlowError("step " + std::to_string(i + 1) + " failed: " + err.what(),
                      std::move(trace));
    }
    if (cfg.snapshot_every > 0 && state.step % cfg.snapshot_every == 0)
      trace.snapshots.push_back({state.step, state.u, state.rho.as_field()});
  }
  trace.final_state = std::move(state);
  return trace;
}

Trace run_flow(const RunConfig& cfg) {
  const GridSpec grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
  const Field g = load_field(cfg.g_path, cfg.g_format, grid);
  const Field u0 =
      cfg.u0 == "copy-g" ? g : load_field(cfg.u0, cfg.u0_format, grid);
  return run_flow(cfg, g, u0);
}

}  // namespace atflow
