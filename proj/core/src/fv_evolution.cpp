#include "hughes/fv_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace hughes {

double cfl_dt(const FluxModel& flux, double slope_bound, double dx, double safety) {
  if (!(safety > 0.0 && safety <= 1.0))
    throw std::invalid_argument("cfl_dt: safety must lie in (0,1]");
  if (!(dx > 0.0)) throw std::invalid_argument("cfl_dt: dx must be positive");
  if (slope_bound < 0.0) throw std::invalid_argument("cfl_dt: negative slope bound");
  return safety * dx / (2.0 * (flux.max_wave_speed() + slope_bound));
}

ResolvedNumerics resolve_numerics(const Numerics& num, const FluxModel& flux,
                                  double slope_bound) {
  ResolvedNumerics r;
  r.dx = 1.0 / num.cells_j;
  r.half_cells = static_cast<int>(std::ceil(num.b_dom * num.cells_j - 1e-9));
  r.b_eff = r.half_cells * r.dx;
  r.slope_bound = slope_bound;
  const double dt_raw = cfl_dt(flux, slope_bound, r.dx, num.cfl_safety);
  r.n_steps = std::max(1, static_cast<int>(std::ceil(num.t_end / dt_raw - 1e-12)));
  r.dt = num.t_end / r.n_steps;
  r.max_admissible_slope = r.dx / (2.0 * r.dt) - flux.max_wave_speed();
  return r;
}

ConstraintSample discrete_constraints(const CellProfile& rho, const ConstrainedExit& exit) {
  double avg_left = 0.0, avg_right = 0.0;
  const int m = static_cast<int>(rho.values.size());
  for (int i = 0; i < m; ++i) {
    const double a = rho.edges[i], b = rho.edges[i + 1];
    avg_left += rho.values[i] * exit.w_left.integral(a, b);
    avg_right += rho.values[i] * exit.w_right.integral(a, b);
  }
  return {exit.g(avg_left), exit.g(avg_right)};
}

void advance_slab(const StepMesh& mesh, double dt, std::span<const double> rho_bottom,
                  std::span<const double> fluxes, std::span<double> rho_top) {
  const int m = mesh.n_cells();
  for (int i = 0; i < m; ++i) {
    const double v = (rho_bottom[i] * mesh.bottom_length(i) - dt * (fluxes[i + 1] - fluxes[i])) /
                     mesh.top_length(i);
    if (v < -1e-12 || v > 1.0 + 1e-12)
      throw std::runtime_error(
          "advance_slab: density left [0,1] (CFL breach or broken flux assembly)");
    rho_top[i] = v;
  }
}

void project_slab(const StepMesh& mesh, std::span<const double> rho_top,
                  std::span<const double> next_bottom_edges, std::span<double> rho_next) {
  project_between(mesh.top_edges, rho_top, next_bottom_edges, rho_next);
}

// ---------------------------------------------------------------- SlabStepper

SlabStepper::SlabStepper(const Scenario& scenario, const ResolvedNumerics& num,
                         TurningPath path)
    : scenario_(&scenario), num_(num), path_(std::move(path)) {
  if (path_.n_steps() < num_.n_steps)
    throw std::invalid_argument("SlabStepper: path shorter than the run");
  if (std::abs(path_.dt - num_.dt) > 1e-12 * std::max(1.0, std::abs(num_.dt)))
    throw std::invalid_argument("SlabStepper: path dt does not match resolved dt");
  init_density();
}

SlabStepper::SlabStepper(const Scenario& scenario, const ResolvedNumerics& num, double xi0)
    : scenario_(&scenario), num_(num) {
  path_.dt = num_.dt;
  path_.xi = {xi0};
  init_density();
}

void SlabStepper::init_density() {
  bottom_edges_ = slab_bottom_edges(path_.xi[0], num_.dx, num_.half_cells, &jn_);
  const int m = static_cast<int>(bottom_edges_.size()) - 1;
  rho_.resize(m);
  for (int i = 0; i < m; ++i)
    rho_[i] = scenario_->initial.average(bottom_edges_[i], bottom_edges_[i + 1]);
}

bool SlabStepper::set_next_xi(double xi_next) {
  if (static_cast<int>(path_.slopes.size()) != n_)
    throw std::logic_error("set_next_xi: path already extends past the current slab");
  double s = (xi_next - path_.xi[n_]) / num_.dt;
  const bool clamped = std::abs(s) > num_.max_admissible_slope;
  if (clamped) s = std::copysign(num_.max_admissible_slope, s);
  path_.slopes.push_back(s);
  path_.xi.push_back(path_.xi[n_] + num_.dt * s);
  return clamped;
}

void SlabStepper::step() {
  if (finished()) throw std::logic_error("SlabStepper::step: run already finished");
  if (static_cast<int>(path_.slopes.size()) <= n_)
    throw std::logic_error("SlabStepper::step: xi^{n+1} not set");

  const StepMesh mesh = build_step_mesh(path_, n_, num_.dx, num_.half_cells);
  const FluxModel& flux = scenario_->flux;
  const double s = path_.slopes[n_];
  const ShiftedFlux left(flux, Side::Left, 0.0);
  const ShiftedFlux right(flux, Side::Right, 0.0);

  const int n_edges = mesh.n_edges();
  const int e_int = mesh.interface_edge();
  flux_buf_.resize(n_edges);
  top_buf_.resize(mesh.n_cells());
  flux_buf_[0] = godunov(0.0, rho_[0], left);
  flux_buf_[n_edges - 1] = godunov(rho_[n_edges - 2], 0.0, right);
  for (int e = 1; e < n_edges - 1; ++e) {
    const double a = rho_[e - 1], b = rho_[e];
    if (e == e_int)
      flux_buf_[e] = interface_flux(a, b, flux, s);
    else if (e < e_int)
      flux_buf_[e] = godunov(a, b, left);
    else
      flux_buf_[e] = godunov(a, b, right);
  }

  last_q_.reset();
  if (const auto* exit = std::get_if<ConstrainedExit>(&scenario_->exit)) {
    const int cells_j = scenario_->numerics.cells_j;
    const auto idx_l = mesh.uniform_edge_index(-cells_j);
    const auto idx_r = mesh.uniform_edge_index(+cells_j);
    if (!idx_l || !idx_r)
      throw std::runtime_error(
          "SlabStepper: turning curve reached an exit edge in constrained mode");
    const ConstraintSample q = discrete_constraints(profile(), *exit);
    flux_buf_[*idx_r] = std::min(flux_buf_[*idx_r], q.q_right);
    flux_buf_[*idx_l] = std::max(flux_buf_[*idx_l], -q.q_left);
    last_q_ = q;
    last_exit_flux_left_ = flux_buf_[*idx_l];
    last_exit_flux_right_ = flux_buf_[*idx_r];
  }

  advance_slab(mesh, num_.dt, rho_, flux_buf_, top_buf_);

  int jn_next = 0;
  next_edges_buf_ = slab_bottom_edges(path_.xi[n_ + 1], num_.dx, num_.half_cells, &jn_next);
  next_rho_buf_.resize(next_edges_buf_.size() - 1);
  project_slab(mesh, top_buf_, next_edges_buf_, next_rho_buf_);

  bottom_edges_.swap(next_edges_buf_);
  rho_.swap(next_rho_buf_);
  jn_ = jn_next;
  ++n_;
}

double SlabStepper::total_mass() const {
  double m = 0.0;
  for (size_t i = 0; i < rho_.size(); ++i)
    m += rho_[i] * (bottom_edges_[i + 1] - bottom_edges_[i]);
  return m;
}

std::vector<double> SlabStepper::uniform_edges() const {
  std::vector<double> e(2 * num_.half_cells + 1);
  for (int j = -num_.half_cells; j <= num_.half_cells; ++j)
    e[j + num_.half_cells] = j * num_.dx;
  return e;
}

std::vector<double> SlabStepper::uniform_values() const {
  const auto edges = uniform_edges();
  std::vector<double> out(edges.size() - 1);
  project_between(bottom_edges_, rho_, edges, out);
  return out;
}

// ----------------------------------------------------------------- run loops

namespace {

RunResult execute_run(const Scenario& s, const ResolvedNumerics& num, SlabStepper& st,
                      const std::function<double(SlabStepper&)>& next_xi,
                      const RunOptions& opts) {
  RunResult out;
  out.numerics = num;
  out.output_edges = st.uniform_edges();
  if (std::holds_alternative<ConstrainedExit>(s.exit)) out.constraints = ConstraintTrace{};

  int target = opts.store_all_steps
                   ? num.n_steps
                   : (opts.snapshot_target > 0 ? opts.snapshot_target : s.numerics.snapshots);
  target = std::clamp(target, 1, num.n_steps);
  const int stride = std::max(1, num.n_steps / target);

  out.diagnostics.slope_bound = num.slope_bound;
  out.diagnostics.mass_series.push_back(st.total_mass());
  out.snapshots.push_back({0.0, st.uniform_values()});

  while (!st.finished()) {
    if (next_xi) {
      const double xi = next_xi(st);
      bool clamped = st.set_next_xi(xi);
      // A turning curve pinned at the corridor ends (the relaxed ODE clamps
      // there) also marks the run as non-conforming.
      clamped = clamped || std::abs(st.path().xi.back()) >= 1.0 - 1e-12;
      if (clamped) ++out.diagnostics.clamp_events;
    }
    st.step();
    const int n = st.slab();
    out.diagnostics.mass_series.push_back(st.total_mass());
    if (out.constraints) {
      const auto& q = st.last_constraints();
      out.constraints->q_left.push_back(q->q_left);
      out.constraints->q_right.push_back(q->q_right);
      out.constraints->exit_flux_left.push_back(st.last_exit_flux_left());
      out.constraints->exit_flux_right.push_back(st.last_exit_flux_right());
    }
    if (n % stride == 0 || n == num.n_steps)
      out.snapshots.push_back({st.time(), st.uniform_values()});
  }

  out.path = st.path();
  out.diagnostics.max_slope = out.path.max_slope();
  return out;
}

} // namespace

RunResult run_frozen_path(const Scenario& scenario, const ResolvedNumerics& num,
                          TurningPath path, const RunOptions& opts) {
  SlabStepper st(scenario, num, std::move(path));
  return execute_run(scenario, num, st, nullptr, opts);
}

RunResult run_with_supplier(const Scenario& scenario, const ResolvedNumerics& num,
                            double xi0, const XiSupplier& next_xi, const RunOptions& opts) {
  SlabStepper st(scenario, num, xi0);
  return execute_run(scenario, num, st, next_xi, opts);
}

RunResult run_frozen_xi(const Scenario& scenario, const RunOptions& opts) {
  const auto* frozen = std::get_if<FrozenOp>(&scenario.turning);
  if (!frozen)
    throw std::invalid_argument("run_frozen_xi: scenario's turning operator is not frozen");
  const double r = frozen->path.slope_bound();
  const ResolvedNumerics num = resolve_numerics(scenario.numerics, scenario.flux, r);
  TurningPath path =
      discretize_path(frozen->path, num.dt, num.n_steps, num.b_eff - 2.0 * num.dx);
  return run_frozen_path(scenario, num, std::move(path), opts);
}

} // namespace hughes
