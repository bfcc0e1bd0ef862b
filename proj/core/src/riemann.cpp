#include "hughes/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hughes/godunov.hpp"

namespace hughes {

namespace {

double numeric_derivative(const FluxModel& f, double rho) {
  const double h = 1e-6;
  // Central difference inside, second-order one-sided at the ends; both are
  // exact for quadratic fluxes.
  if (rho < h) return (-3.0 * f(rho) + 4.0 * f(rho + h) - f(rho + 2.0 * h)) / (2.0 * h);
  if (rho > 1.0 - h)
    return (3.0 * f(rho) - 4.0 * f(rho - h) + f(rho - 2.0 * h)) / (2.0 * h);
  return (f(rho + h) - f(rho - h)) / (2.0 * h);
}

// 20-point Gauss-Legendre nodes/weights on [-1,1].
constexpr int kGaussN = 20;
constexpr double kGaussX[kGaussN] = {
    -0.9931285991850949, -0.9639719272779138, -0.9122344282513259, -0.8391169718222188,
    -0.7463319064601508, -0.6360536807265150, -0.5108670019508271, -0.3737060887154195,
    -0.2277858511416451, -0.0765265211334973, 0.0765265211334973,  0.2277858511416451,
    0.3737060887154195,  0.5108670019508271,  0.6360536807265150,  0.7463319064601508,
    0.8391169718222188,  0.9122344282513259,  0.9639719272779138,  0.9931285991850949};
constexpr double kGaussW[kGaussN] = {
    0.0176140071391521, 0.0406014298003869, 0.0626720483341091, 0.0832767415767048,
    0.1019301198172404, 0.1181945319615184, 0.1316886384491766, 0.1420961093183820,
    0.1491729864726037, 0.1527533871307258, 0.1527533871307258, 0.1491729864726037,
    0.1420961093183820, 0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
    0.0832767415767048, 0.0626720483341091, 0.0406014298003869, 0.0176140071391521};

} // namespace

RiemannSolution::RiemannSolution(double rho_l, double rho_r, FluxModel flux)
    : rho_l_(rho_l), rho_r_(rho_r), flux_(std::move(flux)) {
  if (rho_l < 0.0 || rho_l > 1.0 || rho_r < 0.0 || rho_r > 1.0)
    throw std::invalid_argument("RiemannSolution: states outside [0,1]");
  if (rho_l == rho_r) {
    wave_ = WaveType::Constant;
  } else if (rho_l < rho_r) {
    wave_ = WaveType::Shock;
    speed_ = (flux_(rho_r) - flux_(rho_l)) / (rho_r - rho_l);
  } else {
    wave_ = WaveType::Rarefaction;
    fan_lo_ = numeric_derivative(flux_, rho_l);
    fan_hi_ = numeric_derivative(flux_, rho_r);
  }
}

double RiemannSolution::shock_speed() const {
  if (wave_ != WaveType::Shock) throw std::logic_error("shock_speed: not a shock");
  return speed_;
}

double RiemannSolution::fan_left() const {
  if (wave_ != WaveType::Rarefaction) throw std::logic_error("fan_left: not a rarefaction");
  return fan_lo_;
}

double RiemannSolution::fan_right() const {
  if (wave_ != WaveType::Rarefaction) throw std::logic_error("fan_right: not a rarefaction");
  return fan_hi_;
}

double RiemannSolution::fan_value(double speed) const {
  // (f')^{-1}(speed) by monotone bisection on the central difference
  // quotient of f (exact for quadratic fluxes), clamped to the fan states.
  auto deriv = [this](double rho) { return numeric_derivative(flux_, rho); };
  double lo = 0.0, hi = 1.0;
  if (deriv(lo) <= speed) return std::clamp(lo, rho_r_, rho_l_);
  if (deriv(hi) >= speed) return std::clamp(hi, rho_r_, rho_l_);
  for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
    const double m = 0.5 * (lo + hi);
    (deriv(m) > speed ? lo : hi) = m;
  }
  return std::clamp(0.5 * (lo + hi), rho_r_, rho_l_);
}

double RiemannSolution::operator()(double t, double x) const {
  switch (wave_) {
    case WaveType::Constant: return rho_l_;
    case WaveType::Shock:
      if (t <= 0.0) return x < 0.0 ? rho_l_ : rho_r_;
      return x < speed_ * t ? rho_l_ : rho_r_;
    case WaveType::Rarefaction: {
      if (t <= 0.0) return x < 0.0 ? rho_l_ : rho_r_;
      const double s = x / t;
      if (s <= fan_lo_) return rho_l_;
      if (s >= fan_hi_) return rho_r_;
      return fan_value(s);
    }
  }
  return rho_l_;
}

double RiemannSolution::cell_average(double t, double a, double b) const {
  if (!(a < b)) throw std::invalid_argument("cell_average: empty cell");
  if (wave_ == WaveType::Constant) return rho_l_;
  if (t <= 0.0) {
    const double left = std::min(b, 0.0) - std::min(a, 0.0);
    const double right = std::max(b, 0.0) - std::max(a, 0.0);
    return (left * rho_l_ + right * rho_r_) / (b - a);
  }
  if (wave_ == WaveType::Shock) {
    const double xs = speed_ * t;
    const double left = std::min(b, xs) - std::min(a, xs);
    const double right = std::max(b, xs) - std::max(a, xs);
    return (left * rho_l_ + right * rho_r_) / (b - a);
  }
  // Rarefaction: constant tails plus Gauss quadrature across the fan piece.
  const double xl = fan_lo_ * t, xr = fan_hi_ * t;
  double mass = 0.0;
  const double const_left = std::min(b, xl) - std::min(a, xl);
  if (const_left > 0.0) mass += const_left * rho_l_;
  const double const_right = std::max(b, xr) - std::max(a, xr);
  if (const_right > 0.0) mass += const_right * rho_r_;
  const double p = std::max(a, xl), q = std::min(b, xr);
  if (p < q) {
    const double mid = 0.5 * (p + q), half = 0.5 * (q - p);
    double acc = 0.0;
    for (int i = 0; i < kGaussN; ++i)
      acc += kGaussW[i] * fan_value((mid + half * kGaussX[i]) / t);
    mass += half * acc;
  }
  return mass / (b - a);
}

RiemannSolution exact_lwr_riemann(double rho_l, double rho_r, const FluxModel& flux) {
  return RiemannSolution(rho_l, rho_r, flux);
}

} // namespace hughes
