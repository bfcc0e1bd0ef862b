#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "hughes/fv_evolution.hpp"
#include "hughes/moving_mesh.hpp"

namespace hughes {

// L1 distance of two fields on a common grid (identical edges required).
double l1_distance(const CellProfile& a, const CellProfile& b);

double total_mass(const CellProfile& a);

// max_n |xi^{n+1} - xi^n| / dt; rejects paths with fewer than two samples.
double measure_lipschitz(const TurningPath& path);

struct ConvergenceRow {
  int cells_j;
  double dx;
  double error_l1;
  double observed_order; // NaN on the coarsest level
};

// Exact cell average of the reference solution at the final time.
using ReferenceSolution = std::function<double(double a, double b)>;

struct ConvergenceOptions {
  // L1 error window (clipped per cell); defaults to the whole domain.
  double window_lo = -std::numeric_limits<double>::infinity();
  double window_hi = std::numeric_limits<double>::infinity();
  // 0: take HUGHES_THREADS from the environment, else hardware concurrency.
  int threads = 0;
  // Self-reference refinement factor applied to the finest level when no
  // exact reference is supplied.
  int self_reference_factor = 2;
};

/// Mesh-refinement study: runs the scenario at each level J (frozen or
/// coupled, per its operator), measures L1 errors at t_end against the
/// reference (exact oracle or a finer self-reference run), and reports
/// observed orders log2(e_J / e_{2J}). Levels run concurrently.
std::vector<ConvergenceRow> convergence_study(const Scenario& scenario,
                                              const std::vector<int>& levels,
                                              const ReferenceSolution& reference = nullptr,
                                              const ConvergenceOptions& opts = {});

} // namespace hughes
