#include "hughes/turning_operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hughes {

namespace {

// Cost-weighted integrals of a piecewise-constant profile over [-1,1],
// accumulated from both corridor ends. Cells are clipped to the corridor and
// uncovered parts count as vacuum. Mirrored profiles produce bitwise-mirrored
// sums, so the balance residual of an even profile vanishes exactly and the
// equilibrium point lands exactly on zero.
struct CostBalance {
  std::vector<double> edge;       // breakpoints in [-1,1]
  std::vector<double> cost;       // cost value on (edge[i], edge[i+1])
  std::vector<double> from_left;  // int_{-1}^{edge[i]} c, summed -1 -> 1
  std::vector<double> from_right; // int_{edge[i]}^{1} c, summed 1 -> -1

  int cells() const { return static_cast<int>(cost.size()); }
  double total() const { return from_left.back(); }
  double phi_edge(int i) const { return from_left[i] - from_right[i]; }

  // Phi(a) = int_{-1}^a c - int_a^1 c; affine with slope 2c inside a cell.
  double phi(double a) const {
    a = std::clamp(a, edge.front(), edge.back());
    auto it = std::upper_bound(edge.begin(), edge.end(), a);
    int i = static_cast<int>(it - edge.begin()) - 1;
    i = std::clamp(i, 0, cells() - 1);
    return phi_edge(i) + 2.0 * cost[i] * (a - edge[i]);
  }
};

CostBalance build_balance(const CellProfile& rho, const CostModel& c) {
  CostBalance out;
  const double c0 = c(0.0);
  out.edge.push_back(-1.0);

  auto push = [&](double x, double cost_left) {
    if (x <= out.edge.back()) return;
    out.cost.push_back(cost_left);
    out.edge.push_back(x);
  };

  const int m = static_cast<int>(rho.values.size());
  if (m > 0 && rho.edges.front() > -1.0) push(std::min(rho.edges.front(), 1.0), c0);
  for (int i = 0; i < m; ++i) {
    const double a = std::max(rho.edges[i], -1.0);
    const double b = std::min(rho.edges[i + 1], 1.0);
    if (a < b) push(b, c(rho.values[i]));
    if (rho.edges[i + 1] >= 1.0) break;
  }
  push(1.0, c0);

  const int n = out.cells();
  out.from_left.assign(n + 1, 0.0);
  out.from_right.assign(n + 1, 0.0);
  for (int i = 0; i < n; ++i)
    out.from_left[i + 1] = out.from_left[i] + out.cost[i] * (out.edge[i + 1] - out.edge[i]);
  for (int i = n - 1; i >= 0; --i)
    out.from_right[i] = out.from_right[i + 1] + out.cost[i] * (out.edge[i + 1] - out.edge[i]);
  return out;
}

} // namespace

double equilibrium_residual(const CellProfile& rho, const CostModel& cost, double a) {
  return build_balance(rho, cost).phi(a);
}

double equilibrium_xi(const CellProfile& rho, const CostModel& cost) {
  const CostBalance cb = build_balance(rho, cost);
  // Phi at the edges is strictly increasing with Phi(-1) < 0 < Phi(1);
  // bracket the sign change.
  const int n_edges = cb.cells() + 1;
  int k = n_edges - 1;
  int lo = 0;
  {
    int hi = n_edges - 1;
    while (lo + 1 < hi) {
      const int mid = (lo + hi) / 2;
      (cb.phi_edge(mid) < 0.0 ? lo : hi) = mid;
    }
    k = hi;
  }
  if (cb.phi_edge(k) == 0.0) return cb.edge[k] == 0.0 ? 0.0 : cb.edge[k];
  const int i = k - 1;
  // Midpoint-anchored affine solve: antisymmetric under mirroring down to
  // the last bit, so even profiles balance exactly at zero.
  const double mid = 0.5 * (cb.edge[i] + cb.edge[i + 1]);
  const double phi_mid = 0.5 * (cb.phi_edge(i) + cb.phi_edge(i + 1));
  const double xi = mid - phi_mid / (2.0 * cb.cost[i]);
  return std::clamp(xi, cb.edge[i], cb.edge[i + 1]);
}

void memory_update(SubjectiveDensity& r, std::span<const double> rho_new, double dt) {
  if (!(r.delta > 0.0)) throw std::invalid_argument("memory_update: delta must be positive");
  if (rho_new.size() != r.values.size())
    throw std::invalid_argument("memory_update: grid mismatch");
  const double w = -std::expm1(-r.delta * dt); // 1 - e^{-delta dt}
  // Incremental form: constant-in-time densities are bitwise fixed points.
  for (size_t i = 0; i < r.values.size(); ++i)
    r.values[i] += w * (rho_new[i] - r.values[i]);
}

double memory_xi(const SubjectiveDensity& r, std::span<const double> uniform_edges,
                 const CostModel& cost) {
  return equilibrium_xi({uniform_edges, r.values}, cost);
}

double relaxed_xi_init(const CellProfile& rho0, const CostModel& cost) {
  return equilibrium_xi(rho0, cost);
}

double relaxed_xi_step(double xi, const CellProfile& rho, const CostModel& cost,
                       double epsilon, double dt, bool flip_sign, bool* clamped) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("relaxed_xi_step: epsilon must be positive");
  const CostBalance cb = build_balance(rho, cost);
  // Substep so that h * L <= 1/2 with L = 2||c||_inf / eps, the ODE's
  // Lipschitz constant in xi.
  const double lip = 2.0 * cost.max_cost() / epsilon;
  const int substeps = std::max(1, static_cast<int>(std::ceil(2.0 * dt * lip)));
  const double h = dt / substeps;
  for (int k = 0; k < substeps; ++k) {
    const double balance = -cb.phi(xi); // int_xi^1 c - int_{-1}^xi c
    const double rate = balance / epsilon;
    xi += flip_sign ? h * rate : -h * rate;
    if (xi <= -1.0 || xi >= 1.0) {
      xi = std::clamp(xi, -1.0 + 1e-12, 1.0 - 1e-12);
      if (clamped) *clamped = true;
    }
  }
  return xi;
}

double xi_slope_bound(const TurningOperatorSpec& op, const FluxModel& flux,
                      const CostModel& cost) {
  if (std::holds_alternative<EquilibriumOp>(op)) {
    if (cost.kind() != CostModel::Kind::Affine)
      throw std::invalid_argument(
          "xi_slope_bound: equilibrium operator requires an affine cost");
    // r = alpha * C with C = 2 sup|F| (time-continuity constant).
    return cost.alpha() * 2.0 * flux.max_flux_magnitude();
  }
  if (const auto* mem = std::get_if<MemoryOp>(&op)) {
    if (!(mem->delta > 0.0))
      throw std::invalid_argument("xi_slope_bound: memory operator requires delta > 0");
    // |R(t)-R(s)| <= 2 delta |t-s| pointwise, hence 2 alpha_bar delta for xi.
    return 2.0 * cost.deriv_sup() * mem->delta;
  }
  if (const auto* rel = std::get_if<RelaxedOp>(&op)) {
    if (!(rel->epsilon > 0.0))
      throw std::invalid_argument("xi_slope_bound: relaxed operator requires epsilon > 0");
    return 2.0 * cost.max_cost() / rel->epsilon;
  }
  return std::get<FrozenOp>(op).path.slope_bound();
}

} // namespace hughes
