#pragma once

#include "hughes/corridor_model.hpp"

namespace hughes {

enum class Side { Left, Right };

/// Flux seen from a time slab whose interface edge moves with slope s:
///   Left : -v_L f(rho) - s rho  (convex, interior minimum)
///   Right: +v_R f(rho) - s rho  (concave, interior maximum)
/// The interior extremum is located once at construction so that Godunov
/// values evaluate in closed form.
class ShiftedFlux {
 public:
  ShiftedFlux(const FluxModel& base, Side side, double shift);

  double operator()(double rho) const;
  Side side() const { return side_; }
  double shift() const { return shift_; }
  double arg_extremum() const { return argext_; }
  bool concave() const { return side_ == Side::Right; }
  const FluxModel& base() const { return *base_; }

 private:
  const FluxModel* base_;
  Side side_;
  double shift_;
  double argext_; // argmax for Right, argmin for Left
};

// argmax over [0,1] of the concave map rho -> scale*f(rho) - shift*rho,
// located by derivative-free golden-section bracketing (no closed-form f').
double concave_argmax(const FluxModel& f, double scale, double shift);

/// Exact Godunov flux: min of g over [a,b] if a <= b, max over [b,a]
/// otherwise. States are accepted in a small guard band around [0,1] and
/// clamped before evaluation; anything further out is rejected.
double godunov(double a, double b, const ShiftedFlux& g);
double godunov(double a, double b, const FluxModel& f, Side side);

struct InterfaceCoupling {
  double k;    // intermediate state
  double flux; // common Godunov value, used on both sides of the edge
};

/// Solves God_{f_L - s rho}(rho_left, k) = God_{f_R - s rho}(k, rho_right)
/// for k by bisection (the left side is nonincreasing in k, the right side
/// nondecreasing). Among the flat set of solutions, returns the k closest to
/// the peak density. Flux mismatch at the returned k is at most `tol`.
InterfaceCoupling interface_state(double rho_left, double rho_right,
                                  const FluxModel& f, double slope,
                                  double tol = 1e-12);

/// The single conservative flux value at the turning-curve edge.
double interface_flux(double rho_left, double rho_right, const FluxModel& f,
                      double slope, double tol = 1e-12);

// Constrained exit fluxes at x = +1 / x = -1.
double exit_flux_right(double rho_in, double rho_out, const FluxModel& f, double q_right);
double exit_flux_left(double rho_in, double rho_out, const FluxModel& f, double q_left);

} // namespace hughes
