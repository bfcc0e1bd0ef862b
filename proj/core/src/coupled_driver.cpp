#include "hughes/coupled_driver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace hughes {

namespace {

struct OwnedProfile {
  std::vector<double> edges;
  std::vector<double> values;
  CellProfile view() const { return {edges, values}; }
};

// Exact piecewise-constant profile of the initial datum on [-1,1].
OwnedProfile datum_profile(const InitialDatum& d) {
  std::vector<double> brk = {-1.0, 1.0};
  for (const auto& seg : d.segments()) {
    if (seg.from > -1.0 && seg.from < 1.0) brk.push_back(seg.from);
    if (seg.to > -1.0 && seg.to < 1.0) brk.push_back(seg.to);
  }
  std::sort(brk.begin(), brk.end());
  brk.erase(std::unique(brk.begin(), brk.end()), brk.end());
  OwnedProfile p;
  p.edges = brk;
  p.values.resize(brk.size() - 1);
  for (size_t i = 0; i + 1 < brk.size(); ++i)
    p.values[i] = d(0.5 * (brk[i] + brk[i + 1]));
  return p;
}

std::vector<double> datum_uniform_averages(const InitialDatum& d,
                                           std::span<const double> edges) {
  std::vector<double> v(edges.size() - 1);
  for (size_t i = 0; i + 1 < edges.size(); ++i) v[i] = d.average(edges[i], edges[i + 1]);
  return v;
}

} // namespace

double initial_xi(const Scenario& scenario) {
  if (const auto* frozen = std::get_if<FrozenOp>(&scenario.turning))
    return frozen->path.value_at(0.0);
  const OwnedProfile p = datum_profile(scenario.initial);
  return equilibrium_xi(p.view(), scenario.cost); // relaxed_xi_init coincides
}

XiSupplier make_operator_supplier(const Scenario& scenario, const ResolvedNumerics& num) {
  if (std::holds_alternative<EquilibriumOp>(scenario.turning))
    return [&scenario](SlabStepper& st) {
      return equilibrium_xi(st.profile(), scenario.cost);
    };

  if (const auto* mem = std::get_if<MemoryOp>(&scenario.turning)) {
    auto state = std::make_shared<SubjectiveDensity>();
    state->delta = mem->delta;
    auto r_level = std::make_shared<int>(0);
    auto uedges = std::make_shared<std::vector<double>>();
    return [&scenario, state, r_level, uedges, dt = num.dt](SlabStepper& st) {
      if (uedges->empty()) {
        *uedges = st.uniform_edges();
        state->values = datum_uniform_averages(scenario.initial, *uedges);
      }
      // Bring R up to the current slab (one update per completed step).
      if (*r_level < st.slab()) {
        memory_update(*state, st.uniform_values(), dt);
        *r_level = st.slab();
      }
      return memory_xi(*state, *uedges, scenario.cost);
    };
  }

  if (const auto* rel = std::get_if<RelaxedOp>(&scenario.turning)) {
    return [&scenario, r = *rel, dt = num.dt](SlabStepper& st) {
      // An ODE step that clamps at the corridor ends counts as a clamp event
      // through the slope clamp that follows it.
      return relaxed_xi_step(st.current_xi(), st.profile(), scenario.cost, r.epsilon, dt,
                             r.flip_sign);
    };
  }

  const auto& frozen = std::get<FrozenOp>(scenario.turning);
  return [spec = frozen.path, dt = num.dt](SlabStepper& st) {
    return spec.value_at((st.slab() + 1) * dt);
  };
}

bool step_coupled(SlabStepper& stepper, const XiSupplier& next_xi) {
  const bool clamped = stepper.set_next_xi(next_xi(stepper));
  stepper.step();
  return clamped;
}

RunResult run_coupled(const Scenario& scenario, const RunOptions& opts) {
  if (std::holds_alternative<FrozenOp>(scenario.turning))
    return run_frozen_xi(scenario, opts); // degenerate coupling

  const double r = xi_slope_bound(scenario.turning, scenario.flux, scenario.cost);
  const ResolvedNumerics num = resolve_numerics(scenario.numerics, scenario.flux, r);
  return run_with_supplier(scenario, num, initial_xi(scenario),
                           make_operator_supplier(scenario, num), opts);
}

std::vector<double> evaluate_operator_on_trajectory(const Scenario& scenario,
                                                    const RunResult& run) {
  const int n_levels = static_cast<int>(run.snapshots.size());
  if (n_levels != run.numerics.n_steps + 1)
    throw std::invalid_argument(
        "evaluate_operator_on_trajectory: run must store every time level");
  const auto& edges = run.output_edges;
  const double dt = run.numerics.dt;
  std::vector<double> xi(n_levels);

  if (std::holds_alternative<EquilibriumOp>(scenario.turning)) {
    for (int n = 0; n < n_levels; ++n)
      xi[n] = equilibrium_xi({edges, run.snapshots[n].values}, scenario.cost);
    return xi;
  }
  if (const auto* mem = std::get_if<MemoryOp>(&scenario.turning)) {
    SubjectiveDensity r{mem->delta, run.snapshots[0].values};
    for (int n = 0; n < n_levels; ++n) {
      xi[n] = memory_xi(r, edges, scenario.cost);
      if (n + 1 < n_levels) memory_update(r, run.snapshots[n + 1].values, dt);
    }
    return xi;
  }
  if (const auto* rel = std::get_if<RelaxedOp>(&scenario.turning)) {
    xi[0] = equilibrium_xi({edges, run.snapshots[0].values}, scenario.cost);
    for (int n = 0; n + 1 < n_levels; ++n)
      xi[n + 1] = relaxed_xi_step(xi[n], {edges, run.snapshots[n].values}, scenario.cost,
                                  rel->epsilon, dt, rel->flip_sign);
    return xi;
  }
  const auto& frozen = std::get<FrozenOp>(scenario.turning);
  const TurningPath p = discretize_path(frozen.path, dt, run.numerics.n_steps);
  return p.xi;
}

PicardResult picard_iterate(const Scenario& scenario, int max_iters, double tol,
                            const RunOptions& opts) {
  if (max_iters < 1) throw std::invalid_argument("picard_iterate: max_iters must be >= 1");
  const double r = xi_slope_bound(scenario.turning, scenario.flux, scenario.cost);
  const ResolvedNumerics num = resolve_numerics(scenario.numerics, scenario.flux, r);
  const int n = num.n_steps;

  TurningPath path;
  path.dt = num.dt;
  path.xi.assign(n + 1, 0.0);
  path.slopes.assign(n, 0.0);

  PicardResult out;
  RunOptions full = opts;
  full.store_all_steps = true;
  int clamp_count = 0;

  for (int k = 0; k < max_iters; ++k) {
    const RunResult sweep = run_frozen_path(scenario, num, path, full);
    const std::vector<double> xi_new = evaluate_operator_on_trajectory(scenario, sweep);

    TurningPath next;
    next.dt = num.dt;
    next.xi.reserve(n + 1);
    next.slopes.reserve(n);
    next.xi.push_back(xi_new[0]);
    for (int i = 0; i < n; ++i) {
      double s = (xi_new[i + 1] - next.xi[i]) / num.dt;
      if (std::abs(s) > num.max_admissible_slope) {
        s = std::copysign(num.max_admissible_slope, s);
        ++clamp_count;
      }
      next.slopes.push_back(s);
      next.xi.push_back(next.xi[i] + num.dt * s);
    }

    double residual = 0.0;
    for (int i = 0; i <= n; ++i)
      residual = std::max(residual, std::abs(next.xi[i] - path.xi[i]));
    out.residuals.push_back(residual);
    path = std::move(next);
    if (residual < tol) {
      out.converged = true;
      break;
    }
  }

  out.path = path;
  out.final_run = run_frozen_path(scenario, num, path, opts);
  out.final_run.diagnostics.picard_residuals = out.residuals;
  out.final_run.diagnostics.clamp_events += clamp_count;
  return out;
}

} // namespace hughes
