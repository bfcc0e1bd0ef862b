#pragma once

#include <span>
#include <vector>

#include "hughes/corridor_model.hpp"
#include "hughes/moving_mesh.hpp"

namespace hughes {

// Balance residual Phi(a) = int_{-1}^a c(rho) - int_a^1 c(rho), exact for
// piecewise-constant profiles (cells outside the profile's extent count as
// vacuum). Phi is continuous, strictly increasing, with Phi(-1) < 0 < Phi(1).
double equilibrium_residual(const CellProfile& rho, const CostModel& cost, double a);

// The unique zero of Phi in (-1,1): bisection over the cell edges followed by
// one closed-form solve inside the bracketing cell (Phi is affine there), so
// the result is exact up to floating point.
double equilibrium_xi(const CellProfile& rho, const CostModel& cost);

/// Exponentially-weighted running average of the density ("subjective
/// density"), kept on the uniform output grid. R^0 equals the initial datum:
/// the density is extended by rho_0 for negative times.
struct SubjectiveDensity {
  double delta = 1.0;
  std::vector<double> values;
};

// Exact per-slab integration of the exponential kernel, assuming rho is
// constant in time within the slab:
//   R^{n+1} = e^{-delta dt} R^n + (1 - e^{-delta dt}) rho^{n+1}.
// The two weights are computed to sum to one exactly, so constant-in-time
// densities are fixed points to the last bit.
void memory_update(SubjectiveDensity& r, std::span<const double> rho_new, double dt);

// equilibrium_xi applied to the subjective density instead of rho.
double memory_xi(const SubjectiveDensity& r, std::span<const double> uniform_edges,
                 const CostModel& cost);

// Initial condition of the relaxation ODE: the equilibrium point of rho_0.
double relaxed_xi_init(const CellProfile& rho0, const CostModel& cost);

// One explicit Euler step of -eps xi' = int_xi^1 c(rho) - int_{-1}^xi c(rho),
// sub-stepped so that each substep satisfies h * 2||c||_inf / eps <= 1/2.
// flip_sign integrates the sign-reversed (relaxation-towards-equilibrium)
// variant. If the step leaves (-1,1) the value is clamped and *clamped set.
double relaxed_xi_step(double xi, const CellProfile& rho, const CostModel& cost,
                       double epsilon, double dt, bool flip_sign = false,
                       bool* clamped = nullptr);

// A-priori Lipschitz bound r for the turning curve produced by the operator:
//   equilibrium (affine cost alpha): alpha * 2 * sup|F|
//   memory (rate delta):             2 * alpha_bar * delta
//   relaxed (time eps):              2 * ||c||_inf / eps
//   frozen:                          the path's own slope bound
double xi_slope_bound(const TurningOperatorSpec& op, const FluxModel& flux,
                      const CostModel& cost);

} // namespace hughes
