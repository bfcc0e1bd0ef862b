#pragma once

#include "hughes/corridor_model.hpp"

namespace hughes {

enum class WaveType { Constant, Shock, Rarefaction };

/// Exact similarity solution of the Riemann problem for the (unscaled)
/// concave flux, rightward convention: an increasing jump travels as a shock
/// at Rankine-Hugoniot speed, a decreasing jump opens a rarefaction fan.
/// The initial jump sits at x = 0.
class RiemannSolution {
 public:
  RiemannSolution(double rho_l, double rho_r, FluxModel flux);

  WaveType wave() const { return wave_; }
  double left_state() const { return rho_l_; }
  double right_state() const { return rho_r_; }
  double shock_speed() const;  // Shock only
  double fan_left() const;     // f'(rho_l), Rarefaction only
  double fan_right() const;    // f'(rho_r)

  // Pointwise value at (t,x), t >= 0.
  double operator()(double t, double x) const;

  // Exact cell average over [a,b] at time t (piecewise closed form, Gauss
  // quadrature across the fan).
  double cell_average(double t, double a, double b) const;

 private:
  double rho_l_, rho_r_;
  FluxModel flux_;
  WaveType wave_;
  double speed_ = 0.0;          // shock speed
  double fan_lo_ = 0.0, fan_hi_ = 0.0; // fan characteristic speeds

  double fan_value(double speed) const;
};

// Classical Godunov-exact solution; equal states degenerate to a constant.
RiemannSolution exact_lwr_riemann(double rho_l, double rho_r, const FluxModel& flux);

} // namespace hughes
