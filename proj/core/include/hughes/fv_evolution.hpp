#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hughes/corridor_model.hpp"
#include "hughes/godunov.hpp"
#include "hughes/moving_mesh.hpp"

namespace hughes {

// CFL time step dt = safety * dx / (2 (||f'||_inf + slope_bound)); strict
// inequality in the CFL condition whenever safety < 1.
double cfl_dt(const FluxModel& flux, double slope_bound, double dx, double safety);

struct ResolvedNumerics {
  double dx = 0.0;
  double dt = 0.0;
  int n_steps = 0;
  int half_cells = 0;               // M; domain edges at j*dx, j in [-M, M]
  double b_eff = 0.0;               // M*dx, smallest grid-aligned cover of b_dom
  double slope_bound = 0.0;         // a-priori turning-curve Lipschitz bound r
  double max_admissible_slope = 0.0; // largest |s^n| the mesh accepts at this dt
};

// Resolves dx, dt, step count and domain size from the scenario's numerics
// block and the turning operator's slope bound.
ResolvedNumerics resolve_numerics(const Numerics& num, const FluxModel& flux,
                                  double slope_bound);

struct ConstraintSample {
  double q_left;
  double q_right;
};

// Exit flux caps q_{-1}, q_1: the limiter applied to the weighted density
// averages near the exits. Exact for piecewise-constant density against the
// piecewise-linear weights.
ConstraintSample discrete_constraints(const CellProfile& rho, const ConstrainedExit& exit);

/// Per-slab records of the exits (caps and realized edge fluxes).
struct ConstraintTrace {
  std::vector<double> q_left, q_right;
  std::vector<double> exit_flux_left, exit_flux_right;
};

// Conservative update on one slab: top averages from bottom averages and one
// flux value per mesh edge. Throws if an output value leaves [0,1] by more
// than 1e-12 (monotonicity violation means a bug or a CFL breach).
void advance_slab(const StepMesh& mesh, double dt, std::span<const double> rho_bottom,
                  std::span<const double> fluxes, std::span<double> rho_top);

// Projection of top-partition averages onto the next slab's bottom partition
// (convex combinations; preserves mass and the [0,1] bounds).
void project_slab(const StepMesh& mesh, std::span<const double> rho_top,
                  std::span<const double> next_bottom_edges, std::span<double> rho_next);

/// Drives one simulation slab by slab. In frozen mode the whole turning path
/// is supplied up front; in coupled mode the driver appends xi^{n+1} before
/// each step. The densities live on the slab bottom partitions; uniform-grid
/// views are produced on demand for output.
class SlabStepper {
 public:
  SlabStepper(const Scenario& scenario, const ResolvedNumerics& num, TurningPath path);
  SlabStepper(const Scenario& scenario, const ResolvedNumerics& num, double xi0);

  const ResolvedNumerics& numerics() const { return num_; }
  int slab() const { return n_; }
  double time() const { return n_ * num_.dt; }
  bool finished() const { return n_ >= num_.n_steps; }

  const std::vector<double>& bottom_edges() const { return bottom_edges_; }
  const std::vector<double>& values() const { return rho_; }
  CellProfile profile() const { return {bottom_edges_, rho_}; }

  const TurningPath& path() const { return path_; }
  double current_xi() const { return path_.xi[n_]; }

  // Coupled mode: record xi^{n+1}; the slope is clamped to the CFL-admissible
  // range. Returns true if clamping occurred.
  bool set_next_xi(double xi_next);

  // Advance slab n -> n+1. The path must already contain xi^{n+1}.
  void step();

  // Records of the last completed step.
  const std::optional<ConstraintSample>& last_constraints() const { return last_q_; }
  double last_exit_flux_left() const { return last_exit_flux_left_; }
  double last_exit_flux_right() const { return last_exit_flux_right_; }

  double total_mass() const;

  std::vector<double> uniform_edges() const;
  std::vector<double> uniform_values() const;

 private:
  const Scenario* scenario_;
  ResolvedNumerics num_;
  TurningPath path_;
  int n_ = 0;
  int jn_ = 0;
  std::vector<double> bottom_edges_;
  std::vector<double> rho_;
  std::vector<double> flux_buf_, top_buf_, next_edges_buf_, next_rho_buf_;
  std::optional<ConstraintSample> last_q_;
  double last_exit_flux_left_ = 0.0, last_exit_flux_right_ = 0.0;

  void init_density();
};

struct DensitySnapshot {
  double t;
  std::vector<double> values; // on the uniform output grid
};

struct RunDiagnostics {
  std::vector<double> mass_series; // one entry per time level
  double max_slope = 0.0;
  double slope_bound = 0.0;
  int clamp_events = 0;
  std::vector<double> picard_residuals; // filled by picard mode only
};

struct RunOptions {
  bool store_all_steps = false;
  int snapshot_target = 0; // 0: use scenario.numerics.snapshots
};

struct RunResult {
  ResolvedNumerics numerics;
  TurningPath path;
  std::vector<double> output_edges; // uniform grid, 2M+1 entries
  std::vector<DensitySnapshot> snapshots;
  std::optional<ConstraintTrace> constraints;
  RunDiagnostics diagnostics;

  const DensitySnapshot& final_snapshot() const { return snapshots.back(); }
};

// Full frozen-curve solve: the scenario's turning operator must be FrozenOp.
RunResult run_frozen_xi(const Scenario& scenario, const RunOptions& opts = {});

// Frozen solve against an explicit pre-discretized path (used by the Picard
// mode and by verification tools).
RunResult run_frozen_path(const Scenario& scenario, const ResolvedNumerics& num,
                          TurningPath path, const RunOptions& opts = {});

// Engine loop with a per-slab xi supplier (invoked at slab n with the state
// at t^n, returning xi^{n+1}); used by the coupled driver.
using XiSupplier = std::function<double(SlabStepper&)>;
RunResult run_with_supplier(const Scenario& scenario, const ResolvedNumerics& num,
                            double xi0, const XiSupplier& next_xi,
                            const RunOptions& opts = {});

} // namespace hughes
