#include "hughes/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <stdexcept>
#include <thread>

#include "hughes/coupled_driver.hpp"

namespace hughes {

double l1_distance(const CellProfile& a, const CellProfile& b) {
  if (a.edges.size() != b.edges.size() || a.values.size() != b.values.size())
    throw std::invalid_argument("l1_distance: grid mismatch");
  for (size_t i = 0; i < a.edges.size(); ++i)
    if (a.edges[i] != b.edges[i]) throw std::invalid_argument("l1_distance: grid mismatch");
  double d = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i)
    d += std::abs(a.values[i] - b.values[i]) * (a.edges[i + 1] - a.edges[i]);
  return d;
}

double total_mass(const CellProfile& a) {
  double m = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i)
    m += a.values[i] * (a.edges[i + 1] - a.edges[i]);
  return m;
}

double measure_lipschitz(const TurningPath& path) {
  if (path.xi.size() < 2)
    throw std::invalid_argument("measure_lipschitz: need at least two samples");
  return path.max_slope();
}

namespace {

int thread_budget(int requested, int levels) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("HUGHES_THREADS")) n = std::atoi(env);
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
  }
  return std::clamp(n, 1, levels);
}

RunResult run_scenario_at(const Scenario& base, int cells_j) {
  Scenario s = base;
  s.numerics.cells_j = cells_j;
  s.numerics.snapshots = 1; // only the final state matters here
  if (std::holds_alternative<FrozenOp>(s.turning)) return run_frozen_xi(s);
  return run_coupled(s);
}

double windowed_error(const std::vector<double>& edges, const std::vector<double>& values,
                      const std::vector<double>& reference, double lo, double hi) {
  double err = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    const double a = std::max(edges[i], lo), b = std::min(edges[i + 1], hi);
    if (a < b) err += std::abs(values[i] - reference[i]) * (b - a);
  }
  return err;
}

} // namespace

std::vector<ConvergenceRow> convergence_study(const Scenario& scenario,
                                              const std::vector<int>& levels,
                                              const ReferenceSolution& reference,
                                              const ConvergenceOptions& opts) {
  if (levels.empty()) throw std::invalid_argument("convergence_study: no levels");

  // Launch at most `threads` runs at a time, in level order.
  const int budget = thread_budget(opts.threads, static_cast<int>(levels.size()) + 1);
  std::vector<std::future<RunResult>> jobs(levels.size());
  std::future<RunResult> self_ref_job;

  const bool self_reference = !reference;
  const int finest = *std::max_element(levels.begin(), levels.end());
  const int ref_j = finest * std::max(2, opts.self_reference_factor);

  // Simple bounded launcher: start jobs in waves of `budget`.
  size_t launched = 0;
  std::vector<size_t> order(levels.size());
  for (size_t i = 0; i < levels.size(); ++i) order[i] = i;
  auto launch_wave = [&]() {
    size_t active = 0;
    while (launched < order.size() && active < static_cast<size_t>(budget)) {
      const size_t i = order[launched++];
      jobs[i] = std::async(std::launch::async,
                           [&scenario, j = levels[i]]() { return run_scenario_at(scenario, j); });
      ++active;
    }
  };
  // Run everything; std::async already queues, the wave structure just caps
  // simultaneous launches.
  while (launched < order.size()) {
    const size_t wave_start = launched;
    launch_wave();
    for (size_t i = wave_start; i < launched; ++i) jobs[order[i]].wait();
  }
  if (self_reference)
    self_ref_job = std::async(std::launch::async,
                              [&scenario, ref_j]() { return run_scenario_at(scenario, ref_j); });

  RunResult ref_run;
  if (self_reference) ref_run = self_ref_job.get();

  std::vector<ConvergenceRow> rows;
  rows.reserve(levels.size());
  for (size_t i = 0; i < levels.size(); ++i) {
    const RunResult run = jobs[i].get();
    const auto& edges = run.output_edges;
    const auto& values = run.final_snapshot().values;

    std::vector<double> ref(values.size());
    if (reference) {
      for (size_t c = 0; c < ref.size(); ++c) ref[c] = reference(edges[c], edges[c + 1]);
    } else {
      project_between(ref_run.output_edges, ref_run.final_snapshot().values, edges, ref);
    }
    ConvergenceRow row;
    row.cells_j = levels[i];
    row.dx = run.numerics.dx;
    row.error_l1 = windowed_error(edges, values, ref, opts.window_lo, opts.window_hi);
    row.observed_order = std::numeric_limits<double>::quiet_NaN();
    rows.push_back(row);
  }

  // observed order between consecutive rows sorted by J.
  std::vector<size_t> by_j(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) by_j[i] = i;
  std::sort(by_j.begin(), by_j.end(),
            [&](size_t a, size_t b) { return rows[a].cells_j < rows[b].cells_j; });
  for (size_t i = 1; i < by_j.size(); ++i) {
    const ConvergenceRow& coarse = rows[by_j[i - 1]];
    ConvergenceRow& fine = rows[by_j[i]];
    const double ratio = static_cast<double>(fine.cells_j) / coarse.cells_j;
    if (coarse.error_l1 > 0.0 && fine.error_l1 > 0.0)
      fine.observed_order = std::log(coarse.error_l1 / fine.error_l1) / std::log(ratio);
  }
  return rows;
}

} // namespace hughes
