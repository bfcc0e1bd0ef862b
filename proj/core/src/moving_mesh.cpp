#include "hughes/moving_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hughes {

namespace {

// Index j with x_j <= xi < x_{j+1} (half-open convention), robust to fp
// boundary noise in the division.
int cell_index_of(double xi, double dx) {
  int j = static_cast<int>(std::floor(xi / dx));
  while (j * dx > xi) --j;
  while ((j + 1) * dx <= xi) ++j;
  return j;
}

} // namespace

double integrate_cells(const CellProfile& profile, double a, double b) {
  return integrate_over(profile.edges, profile.values, a, b, [](double v) { return v; });
}

double TurningPath::value_at(double t) const {
  if (slopes.empty()) throw std::invalid_argument("TurningPath: empty path");
  int n = static_cast<int>(std::floor(t / dt));
  n = std::clamp(n, 0, n_steps() - 1);
  return xi[n] + (t - n * dt) * slopes[n];
}

double TurningPath::max_slope() const {
  double r = 0.0;
  for (double s : slopes) r = std::max(r, std::abs(s));
  return r;
}

TurningPath discretize_path(const std::function<double(double)>& curve, double dt,
                            int n_steps, double domain_bound) {
  if (!(dt > 0.0) || n_steps < 1)
    throw std::invalid_argument("discretize_path: need dt > 0 and n_steps >= 1");
  TurningPath p;
  p.dt = dt;
  p.xi.resize(n_steps + 1);
  p.slopes.resize(n_steps);
  p.xi[0] = curve(0.0);
  for (int n = 0; n < n_steps; ++n) {
    // Slab average of xi'; for sampled input this is the divided difference.
    p.slopes[n] = (curve((n + 1) * dt) - curve(n * dt)) / dt;
    p.xi[n + 1] = p.xi[n] + dt * p.slopes[n];
  }
  for (double v : p.xi)
    if (std::abs(v) > domain_bound)
      throw std::invalid_argument("discretize_path: path exits the computational domain");
  return p;
}

TurningPath discretize_path(const FrozenPathSpec& spec, double dt, int n_steps,
                            double domain_bound) {
  return discretize_path([&spec](double t) { return spec.value_at(t); }, dt, n_steps,
                         domain_bound);
}

std::optional<int> StepMesh::uniform_edge_index(int j) const {
  if (j < -half_cells || j > half_cells) return std::nullopt;
  if (node_aligned) {
    if (j == jn) return std::nullopt; // that position is the interface edge
    return j + half_cells;
  }
  if (j <= jn - 1) return j + half_cells;
  if (j >= jn + 2) return j + half_cells - 1;
  return std::nullopt; // replaced by the interface edge
}

std::vector<double> slab_bottom_edges(double xi, double dx, int half_cells, int* jn_out) {
  const int M = half_cells;
  const int jn = cell_index_of(xi, dx);
  if (jn - 1 < -M || jn + 2 > M)
    throw std::invalid_argument(
        "slab_bottom_edges: turning curve too close to the computational boundary");
  std::vector<double> edges;
  if (xi == jn * dx) {
    // Node-aligned interface: the curve coincides with a uniform edge, no
    // cells merge and the mesh stays fully uniform (and mirror-symmetric,
    // which keeps even scenarios exactly even).
    edges.reserve(2 * M + 1);
    for (int j = -M; j <= M; ++j) edges.push_back(j * dx);
  } else {
    edges.reserve(2 * M);
    for (int j = -M; j <= jn - 1; ++j) edges.push_back(j * dx);
    edges.push_back(xi);
    for (int j = jn + 2; j <= M; ++j) edges.push_back(j * dx);
  }
  if (jn_out) *jn_out = jn;
  return edges;
}

StepMesh build_step_mesh(const TurningPath& path, int n, double dx, int half_cells) {
  if (n < 0 || n >= path.n_steps())
    throw std::invalid_argument("build_step_mesh: slab index out of range");
  StepMesh m;
  m.dx = dx;
  m.half_cells = half_cells;
  m.xi_bottom = path.xi[n];
  m.xi_top = path.xi[n + 1];
  m.bottom_edges = slab_bottom_edges(m.xi_bottom, dx, half_cells, &m.jn);
  m.node_aligned = (m.xi_bottom == m.jn * dx);

  // The CFL bound keeps |s^n| dt <= dx/2, so the interface edge stays
  // strictly inside the two trapezoids ("never reduced to a triangle").
  if (std::abs(m.xi_top - m.xi_bottom) > 0.5 * dx * (1.0 + 1e-12))
    throw std::runtime_error("build_step_mesh: CFL violation, slope exceeds dx/(2 dt)");
  const double right_limit = (m.node_aligned ? m.jn + 1 : m.jn + 2) * dx;
  if (!(m.xi_top > (m.jn - 1) * dx && m.xi_top < right_limit))
    throw std::runtime_error("build_step_mesh: CFL violation, interface crosses a full cell");

  m.top_edges = m.bottom_edges;
  m.top_edges[m.interface_edge()] = m.xi_top;
  return m;
}

PartitionOverlap overlap_lengths(std::span<const double> source_edges,
                                 std::span<const double> target_edges) {
  if (source_edges.size() < 2 || target_edges.size() < 2)
    throw std::invalid_argument("overlap_lengths: degenerate partition");
  if (source_edges.front() != target_edges.front() ||
      source_edges.back() != target_edges.back())
    throw std::invalid_argument("overlap_lengths: partitions cover different intervals");

  const int ns = static_cast<int>(source_edges.size()) - 1;
  const int nt = static_cast<int>(target_edges.size()) - 1;
  PartitionOverlap overlap;
  overlap.rows.resize(nt);
  int i = 0;
  for (int j = 0; j < nt; ++j) {
    const double tl = target_edges[j], tr = target_edges[j + 1];
    while (i < ns - 1 && source_edges[i + 1] <= tl) ++i;
    for (int ii = i; ii < ns; ++ii) {
      const double p = std::max(source_edges[ii], tl);
      const double q = std::min(source_edges[ii + 1], tr);
      if (p < q) overlap.rows[j].push_back({ii, q - p});
      if (source_edges[ii + 1] >= tr) break;
    }
  }
  return overlap;
}

void project_between(std::span<const double> source_edges,
                     std::span<const double> source_values,
                     std::span<const double> target_edges, std::span<double> target_values) {
  const int ns = static_cast<int>(source_values.size());
  const int nt = static_cast<int>(target_values.size());
  int i = 0;
  for (int j = 0; j < nt; ++j) {
    const double tl = target_edges[j], tr = target_edges[j + 1];
    while (i < ns - 1 && source_edges[i + 1] <= tl) ++i;
    if (source_edges[i] == tl && source_edges[i + 1] == tr) {
      target_values[j] = source_values[i]; // identical cell, copy verbatim
      continue;
    }
    double acc = 0.0;
    for (int ii = i; ii < ns; ++ii) {
      const double p = std::max(source_edges[ii], tl);
      const double q = std::min(source_edges[ii + 1], tr);
      if (p < q) acc += (q - p) * source_values[ii];
      if (source_edges[ii + 1] >= tr) break;
    }
    target_values[j] = acc / (tr - tl);
  }
}

} // namespace hughes
