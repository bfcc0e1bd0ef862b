#include "hughes/godunov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hughes {

namespace {

constexpr double kStateGuard = 1e-9;

double checked_state(double a, const char* what) {
  if (a < -kStateGuard || a > 1.0 + kStateGuard)
    throw std::invalid_argument(std::string(what) + ": state outside [0,1]");
  return std::clamp(a, 0.0, 1.0);
}

// Godunov value of a concave flux g with argmax p.
template <class G>
double god_concave(const G& g, double p, double a, double b) {
  if (a <= b) return std::min(g(a), g(b));
  return g(std::clamp(p, b, a));
}

} // namespace

double concave_argmax(const FluxModel& f, double scale, double shift) {
  auto g = [&](double x) { return scale * f(x) - shift * x; };
  // Golden-section bracketing; g is concave so ties can shrink either side.
  constexpr double inv_phi = 0.6180339887498949;
  double lo = 0.0, hi = 1.0;
  double m1 = hi - inv_phi * (hi - lo);
  double m2 = lo + inv_phi * (hi - lo);
  double g1 = g(m1), g2 = g(m2);
  for (int it = 0; it < 80; ++it) {
    if (g1 < g2) {
      lo = m1;
      m1 = m2;
      g1 = g2;
      m2 = lo + inv_phi * (hi - lo);
      g2 = g(m2);
    } else {
      hi = m2;
      m2 = m1;
      g2 = g1;
      m1 = hi - inv_phi * (hi - lo);
      g1 = g(m1);
    }
  }
  return 0.5 * (lo + hi);
}

ShiftedFlux::ShiftedFlux(const FluxModel& base, Side side, double shift)
    : base_(&base), side_(side), shift_(shift) {
  // Left side: argmin of -v_L f - s rho equals argmax of v_L f + s rho.
  argext_ = (side == Side::Right) ? concave_argmax(base, base.right_scale(), shift)
                                  : concave_argmax(base, base.left_scale(), -shift);
}

double ShiftedFlux::operator()(double rho) const {
  const double f = (*base_)(rho);
  return (side_ == Side::Right) ? base_->right_scale() * f - shift_ * rho
                                : -base_->left_scale() * f - shift_ * rho;
}

double godunov(double a, double b, const ShiftedFlux& g) {
  a = checked_state(a, "godunov");
  b = checked_state(b, "godunov");
  if (g.concave()) return god_concave(g, g.arg_extremum(), a, b);
  // Convex flux: God_g(a,b) = -God_{-g}(b,a), and -g is concave with argmax
  // at g's argmin. Routing through the one concave kernel keeps left/right
  // evaluations exact mirrors of each other.
  auto neg = [&](double x) { return -g(x); };
  return -god_concave(neg, g.arg_extremum(), b, a);
}

double godunov(double a, double b, const FluxModel& f, Side side) {
  return godunov(a, b, ShiftedFlux(f, side, 0.0));
}

InterfaceCoupling interface_state(double rho_left, double rho_right, const FluxModel& f,
                                  double slope, double tol) {
  rho_left = checked_state(rho_left, "interface_state");
  rho_right = checked_state(rho_right, "interface_state");

  const ShiftedFlux gl(f, Side::Left, slope);
  const ShiftedFlux gr(f, Side::Right, slope);
  auto mismatch = [&](double k) {
    return godunov(rho_left, k, gl) - godunov(k, rho_right, gr);
  };

  // mismatch is nonincreasing with mismatch(0) >= 0 >= mismatch(1); the
  // existence of a crossing is part of the flux hypotheses.
  double lo = 0.0, hi = 1.0;
  const double h_lo = mismatch(lo), h_hi = mismatch(hi);
  if (h_lo < -tol || h_hi > tol)
    throw std::runtime_error(
        "interface_state: coupling equation not bracketed (model hypothesis violation)");

  // Drive the bracket to collapse; the flux is evaluated at this tight zero
  // (the mismatch there is at the rounding level, far below tol).
  double k0;
  if (h_lo <= 0.0) {
    k0 = lo;
  } else if (h_hi >= 0.0) {
    k0 = hi;
  } else {
    for (int it = 0; it < 80 && hi - lo > 1e-16; ++it) {
      const double m = 0.5 * (lo + hi);
      (mismatch(m) > 0.0 ? lo : hi) = m;
    }
    k0 = (std::abs(mismatch(lo)) <= std::abs(mismatch(hi))) ? lo : hi;
  }

  // With a static edge the left Godunov value is nonpositive and the right
  // one nonnegative, so the coupled value is exactly zero.
  const double flux = (slope == 0.0) ? 0.0 : godunov(rho_left, k0, gl);

  // The zero set is an interval on which the coupled value is constant;
  // report the solution closest to the peak density (within tol in flux).
  double k = k0;
  const double p = f.peak_density();
  const double hp = mismatch(p);
  if (std::abs(hp) <= tol) {
    k = p;
  } else if (hp > tol && p < k) {
    double a = p, b = k; // h(a) > tol, |h(b)| <= tol
    for (int it = 0; it < 60; ++it) {
      const double m = 0.5 * (a + b);
      (mismatch(m) > tol ? a : b) = m;
    }
    k = b;
  } else if (hp < -tol && p > k) {
    double a = k, b = p; // |h(a)| <= tol, h(b) < -tol
    for (int it = 0; it < 60; ++it) {
      const double m = 0.5 * (a + b);
      (mismatch(m) < -tol ? b : a) = m;
    }
    k = a;
  }
  return {k, flux};
}

double interface_flux(double rho_left, double rho_right, const FluxModel& f, double slope,
                      double tol) {
  return interface_state(rho_left, rho_right, f, slope, tol).flux;
}

double exit_flux_right(double rho_in, double rho_out, const FluxModel& f, double q_right) {
  return std::min(godunov(rho_in, rho_out, f, Side::Right), q_right);
}

double exit_flux_left(double rho_in, double rho_out, const FluxModel& f, double q_left) {
  return std::max(godunov(rho_in, rho_out, f, Side::Left), -q_left);
}

} // namespace hughes
