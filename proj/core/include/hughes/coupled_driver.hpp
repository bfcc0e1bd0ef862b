#pragma once

#include "hughes/fv_evolution.hpp"
#include "hughes/turning_operators.hpp"

namespace hughes {

// Turning point of the (piecewise-constant) initial datum under the
// scenario's operator; this seeds both the splitting and the Picard modes.
double initial_xi(const Scenario& scenario);

// Per-slab operator evaluation for the splitting scheme: given the state at
// slab n, returns xi^{n+1} (equilibrium and memory re-balance the slab-n
// information, relaxed takes an Euler step). Owns the subjective-density
// state for the memory operator.
XiSupplier make_operator_supplier(const Scenario& scenario, const ResolvedNumerics& num);

// One splitting step: place xi^{n+1}, clamp the slope to the CFL-admissible
// range, then advance and project. Returns whether clamping occurred.
bool step_coupled(SlabStepper& stepper, const XiSupplier& next_xi);

/// Coupled solve by per-slab explicit splitting: evaluate the operator on
/// slab-n information to place xi^{n+1}, clamp the slope to the
/// CFL-admissible range (counted as a clamp event), then advance and project.
/// A frozen operator reproduces run_frozen_xi exactly.
RunResult run_coupled(const Scenario& scenario, const RunOptions& opts = {});

struct PicardResult {
  TurningPath path;               // last iterate xi_k
  std::vector<double> residuals;  // sup_n |xi_k^n - xi_{k-1}^n| per iteration
  bool converged = false;
  RunResult final_run;            // frozen solve with the last iterate
};

/// Global fixed-point iteration xi_{k+1} = I(S(xi_k)) starting from xi == 0:
/// each sweep solves the frozen-curve problem over [0,T] and re-evaluates the
/// operator on the stored trajectory. Stops when the sup-residual drops below
/// tol; non-convergence is reported, not fatal.
PicardResult picard_iterate(const Scenario& scenario, int max_iters, double tol,
                            const RunOptions& opts = {});

// Operator re-evaluation on a stored trajectory (the "I" of the Picard map):
// one xi value per stored time level. The run must contain every step.
std::vector<double> evaluate_operator_on_trajectory(const Scenario& scenario,
                                                    const RunResult& run);

} // namespace hughes
