#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "hughes/corridor_model.hpp"

namespace hughes {

/// Piecewise-constant field on a sorted edge partition (view).
struct CellProfile {
  std::span<const double> edges;  // size m+1
  std::span<const double> values; // size m
};

// Integral over [a,b] of transform(value) against the cell partition; the
// window is clipped to the partition's extent.
template <class F>
double integrate_over(std::span<const double> edges, std::span<const double> values,
                      double a, double b, F&& transform) {
  double sum = 0.0;
  const int m = static_cast<int>(values.size());
  for (int i = 0; i < m; ++i) {
    const double p = edges[i] > a ? edges[i] : a;
    const double q = edges[i + 1] < b ? edges[i + 1] : b;
    if (p < q) sum += (q - p) * transform(values[i]);
  }
  return sum;
}

double integrate_cells(const CellProfile& profile, double a, double b);

/// Discrete turning curve: values xi^n on the slab grid and slab slopes s^n,
/// with xi[n+1] = xi[n] + dt * slopes[n] holding exactly as stored.
struct TurningPath {
  double dt = 0.0;
  std::vector<double> xi;     // size n_steps()+1
  std::vector<double> slopes; // size n_steps()

  int n_steps() const { return static_cast<int>(slopes.size()); }
  double value_at(double t) const; // continuous piecewise-linear xi_Delta
  double max_slope() const;
};

// Slab-averaged slopes of a Lipschitz curve given analytically or as
// piecewise-linear samples. `domain_bound`, when finite, rejects paths that
// leave [-domain_bound, domain_bound].
TurningPath discretize_path(const std::function<double(double)>& xi, double dt,
                            int n_steps,
                            double domain_bound = std::numeric_limits<double>::infinity());
TurningPath discretize_path(const FrozenPathSpec& spec, double dt, int n_steps,
                            double domain_bound = std::numeric_limits<double>::infinity());

/// One time-slab of the adapted mesh: uniform cells of width dx on
/// [-half_cells*dx, half_cells*dx], except the two trapezoids sharing the
/// interface edge, which runs from xi^n (bottom) to xi^{n+1} (top). For a
/// curve strictly inside a cell, the uniform edges x_{j_n} and x_{j_n+1} are
/// replaced by the interface edge, so the trapezoid cells have lengths in
/// [dx, 2dx) and are never triangles under the CFL condition. A curve that
/// sits exactly on a node keeps the full uniform edge set (the node itself
/// becomes the interface edge).
struct StepMesh {
  double dx = 0.0;
  int half_cells = 0; // M: edges at j*dx for j in [-M, M]
  int jn = 0;         // xi_bottom in [x_{j_n}, x_{j_n+1})
  bool node_aligned = false;
  double xi_bottom = 0.0;
  double xi_top = 0.0;

  std::vector<double> bottom_edges; // 2M entries, 2M+1 when node-aligned
  std::vector<double> top_edges;    // identical except the interface edge

  int n_cells() const { return static_cast<int>(bottom_edges.size()) - 1; }
  int n_edges() const { return static_cast<int>(bottom_edges.size()); }
  int interface_edge() const { return jn + half_cells; }
  int left_trapezoid() const { return interface_edge() - 1; }  // cell index
  int right_trapezoid() const { return interface_edge(); }     // cell index

  double bottom_length(int cell) const { return bottom_edges[cell + 1] - bottom_edges[cell]; }
  double top_length(int cell) const { return top_edges[cell + 1] - top_edges[cell]; }

  // Index of the surviving uniform edge at x_j, if it was not replaced by the
  // interface edge.
  std::optional<int> uniform_edge_index(int j) const;
};

// Geometry of slab n. Throws if the path leaves the domain interior or if
// the slab's slope violates the CFL bound (interface would cross a full cell).
StepMesh build_step_mesh(const TurningPath& path, int n, double dx, int half_cells);

// Bottom partition of the slab whose interface starts at xi (uniform edges
// with x_{j_n}, x_{j_n+1} replaced by xi). This is what the projection step
// targets before the next slab's slope is known.
std::vector<double> slab_bottom_edges(double xi, double dx, int half_cells,
                                      int* jn_out = nullptr);

/// Sparse intersection lengths between a source partition and a target
/// partition of the same interval: rows indexed by target cell.
struct PartitionOverlap {
  struct Entry {
    int source;
    double length;
  };
  std::vector<std::vector<Entry>> rows;
};

// Entries |target_j  ∩ source_i|; every row sums to the target cell length.
PartitionOverlap overlap_lengths(std::span<const double> source_edges,
                                 std::span<const double> target_edges);

// Mass-preserving projection of cell averages from one partition onto
// another covering the same interval. Cells bounded by identical edge values
// are copied verbatim.
void project_between(std::span<const double> source_edges, std::span<const double> source_values,
                     std::span<const double> target_edges, std::span<double> target_values);

} // namespace hughes
