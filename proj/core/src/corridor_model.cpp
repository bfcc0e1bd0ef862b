#include "hughes/corridor_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hughes {

namespace {

// Piecewise-linear interpolation of `v` on the uniform grid of [lo,hi].
double pw_linear(const std::vector<double>& v, double lo, double hi, double x) {
  const int m = static_cast<int>(v.size());
  if (m == 1) return v[0];
  if (x <= lo) return v.front();
  if (x >= hi) return v.back();
  const double h = (hi - lo) / (m - 1);
  int i = static_cast<int>((x - lo) / h);
  i = std::clamp(i, 0, m - 2);
  const double xl = lo + i * h;
  const double t = (x - xl) / h;
  return v[i] + t * (v[i + 1] - v[i]);
}

} // namespace

// ---------------------------------------------------------------- FluxModel

double FluxModel::operator()(double rho) const {
  switch (kind_) {
    case Kind::Parabolic: return vmax_ * rho * (1.0 - rho);
    case Kind::Tabulated: return pw_linear(table_, 0.0, 1.0, rho);
    case Kind::Custom: return eval_(rho);
  }
  return 0.0;
}

FluxModel FluxModel::parabolic(double vmax, double left_scale, double right_scale) {
  if (vmax <= 0.0) throw std::invalid_argument("FluxModel::parabolic: vmax must be positive");
  FluxModel f;
  f.kind_ = Kind::Parabolic;
  f.vmax_ = vmax;
  f.peak_ = 0.5;
  f.peak_flux_ = 0.25 * vmax;
  f.lipschitz_ = vmax; // |f'| = vmax |1 - 2 rho| <= vmax
  f.left_scale_ = left_scale;
  f.right_scale_ = right_scale;
  return f;
}

FluxModel FluxModel::tabulated(std::vector<double> values, double left_scale,
                               double right_scale) {
  if (values.size() < 3)
    throw std::invalid_argument("FluxModel::tabulated: need at least 3 nodes");
  FluxModel f;
  f.kind_ = Kind::Tabulated;
  f.table_ = std::move(values);
  const auto& v = f.table_;
  const int m = static_cast<int>(v.size());
  const double h = 1.0 / (m - 1);
  auto it = std::max_element(v.begin(), v.end());
  f.peak_ = static_cast<double>(it - v.begin()) * h;
  f.peak_flux_ = *it;
  double lip = 0.0;
  for (int i = 0; i + 1 < m; ++i) lip = std::max(lip, std::abs(v[i + 1] - v[i]) / h);
  f.lipschitz_ = lip;
  f.left_scale_ = left_scale;
  f.right_scale_ = right_scale;
  return f;
}

FluxModel FluxModel::custom(std::function<double(double)> fn, double peak_density,
                            double lipschitz, double left_scale, double right_scale) {
  FluxModel f;
  f.kind_ = Kind::Custom;
  f.eval_ = std::move(fn);
  f.peak_ = peak_density;
  f.peak_flux_ = f.eval_(peak_density);
  f.lipschitz_ = lipschitz;
  f.left_scale_ = left_scale;
  f.right_scale_ = right_scale;
  return f;
}

double FluxModel::max_wave_speed() const {
  return std::max(left_scale_, right_scale_) * lipschitz_;
}

double FluxModel::max_flux_magnitude() const {
  return std::max(left_scale_, right_scale_) * peak_flux_;
}

// ---------------------------------------------------------------- CostModel

CostModel CostModel::affine(double alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("CostModel::affine: alpha must be positive");
  CostModel c;
  c.kind_ = Kind::Affine;
  c.alpha_ = alpha;
  c.deriv_sup_ = alpha;
  c.deriv_inf_ = alpha;
  return c;
}

CostModel CostModel::tabulated(std::vector<double> values) {
  if (values.size() < 2)
    throw std::invalid_argument("CostModel::tabulated: need at least 2 nodes");
  CostModel c;
  c.kind_ = Kind::Tabulated;
  c.table_ = std::move(values);
  const int m = static_cast<int>(c.table_.size());
  const double h = 1.0 / (m - 1);
  // Derivative bounds are the extreme finite-difference slopes of the table.
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i + 1 < m; ++i) {
    const double s = (c.table_[i + 1] - c.table_[i]) / h;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  c.deriv_inf_ = lo;
  c.deriv_sup_ = hi;
  return c;
}

double CostModel::operator()(double rho) const {
  if (kind_ == Kind::Affine) return 1.0 + alpha_ * rho;
  return pw_linear(table_, 0.0, 1.0, rho);
}

double CostModel::max_cost() const { return (*this)(1.0); }

CostModel affine_cost(double alpha) { return CostModel::affine(alpha); }

// ------------------------------------------------------------------ Limiter

Limiter Limiter::constant(double value) {
  Limiter g;
  g.values_ = {value, value};
  return g;
}

Limiter Limiter::tabulated(std::vector<double> values) {
  if (values.size() < 2)
    throw std::invalid_argument("Limiter::tabulated: need at least 2 nodes");
  Limiter g;
  g.values_ = std::move(values);
  return g;
}

double Limiter::operator()(double u) const { return pw_linear(values_, 0.0, 1.0, u); }

// ------------------------------------------------------------ WeightProfile

WeightProfile WeightProfile::uniform(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("WeightProfile: empty support");
  WeightProfile w;
  w.lo_ = lo;
  w.hi_ = hi;
  return w;
}

WeightProfile WeightProfile::tabulated(double lo, double hi, std::vector<double> values) {
  if (!(lo < hi)) throw std::invalid_argument("WeightProfile: empty support");
  if (values.size() < 2)
    throw std::invalid_argument("WeightProfile::tabulated: need at least 2 nodes");
  WeightProfile w;
  w.lo_ = lo;
  w.hi_ = hi;
  w.values_ = std::move(values);
  return w;
}

double WeightProfile::operator()(double x) const {
  if (x < lo_ || x > hi_) return 0.0;
  if (is_uniform()) return 1.0 / (hi_ - lo_);
  return pw_linear(values_, lo_, hi_, x);
}

double WeightProfile::integral(double a, double b) const {
  a = std::max(a, lo_);
  b = std::min(b, hi_);
  if (!(a < b)) return 0.0;
  if (is_uniform()) return (b - a) / (hi_ - lo_);
  // Exact integral of the piecewise-linear interpolant over [a,b].
  const int m = static_cast<int>(values_.size());
  const double h = (hi_ - lo_) / (m - 1);
  double sum = 0.0;
  int i0 = std::clamp(static_cast<int>((a - lo_) / h), 0, m - 2);
  for (int i = i0; i + 1 < m; ++i) {
    const double xl = lo_ + i * h, xr = lo_ + (i + 1) * h;
    const double p = std::max(a, xl), q = std::min(b, xr);
    if (p >= q) {
      if (xl >= b) break;
      continue;
    }
    sum += (q - p) * 0.5 * (pw_linear(values_, lo_, hi_, p) + pw_linear(values_, lo_, hi_, q));
  }
  return sum;
}

// ------------------------------------------------------------- InitialDatum

InitialDatum::InitialDatum(std::vector<Segment> segments) : segments_(std::move(segments)) {
  std::sort(segments_.begin(), segments_.end(),
            [](const Segment& a, const Segment& b) { return a.from < b.from; });
  for (size_t i = 0; i < segments_.size(); ++i) {
    if (!(segments_[i].from < segments_[i].to))
      throw std::invalid_argument("InitialDatum: segment with nonpositive length");
    if (i > 0 && segments_[i].from < segments_[i - 1].to - 1e-15)
      throw std::invalid_argument("InitialDatum: overlapping segments");
  }
}

double InitialDatum::operator()(double x) const {
  for (const auto& s : segments_)
    if (x >= s.from && x < s.to) return s.value;
  return 0.0;
}

double InitialDatum::average(double a, double b) const {
  if (!(a < b)) return 0.0;
  double mass = 0.0;
  for (const auto& s : segments_) {
    const double p = std::max(a, s.from), q = std::min(b, s.to);
    if (p < q) mass += s.value * (q - p);
  }
  return mass / (b - a);
}

// ----------------------------------------------------------- FrozenPathSpec

double FrozenPathSpec::value_at(double t) const {
  if (times.empty()) throw std::invalid_argument("FrozenPathSpec: empty path");
  if (times.size() != values.size())
    throw std::invalid_argument("FrozenPathSpec: times/values size mismatch");
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const size_t i = static_cast<size_t>(it - times.begin()) - 1;
  const double w = (t - times[i]) / (times[i + 1] - times[i]);
  return values[i] + w * (values[i + 1] - values[i]);
}

double FrozenPathSpec::slope_bound() const {
  double r = 0.0;
  for (size_t i = 0; i + 1 < times.size(); ++i) {
    const double dt = times[i + 1] - times[i];
    if (dt <= 0.0) throw std::invalid_argument("FrozenPathSpec: times not increasing");
    r = std::max(r, std::abs(values[i + 1] - values[i]) / dt);
  }
  return r;
}

// --------------------------------------------------------- ValidationReport

void ValidationReport::add(std::string hypothesis, std::string message, double witness) {
  violations_.push_back({std::move(hypothesis), std::move(message), witness});
}

std::string ValidationReport::summary() const {
  if (ok()) return "scenario accepted";
  std::ostringstream os;
  os << violations_.size() << " hypothesis violation(s):";
  for (const auto& v : violations_)
    os << "\n  [" << v.hypothesis << "] " << v.message << " (witness " << v.witness << ")";
  return os.str();
}

// --------------------------------------------------------- validate_scenario

namespace {

void check_flux(const FluxModel& f, int n, ValidationReport& r) {
  if (std::abs(f(0.0)) > 1e-14)
    r.add("flux-endpoints", "f(0) must vanish", 0.0);
  if (std::abs(f(1.0)) > 1e-14)
    r.add("flux-endpoints", "f(1) must vanish", 1.0);
  if (!(f.peak_density() > 0.0 && f.peak_density() < 1.0))
    r.add("flux-peak-interior", "peak density must lie in (0,1)", f.peak_density());
  if (f.left_scale() <= 0.0 || f.right_scale() <= 0.0)
    r.add("flux-scales", "corridor scales must be positive", f.left_scale());

  const double h = 1.0 / n;
  bool positive_ok = true, concave_ok = true, unimodal_ok = true, lip_ok = true;
  double prev = f(0.0);
  for (int i = 1; i <= n; ++i) {
    const double x = i * h;
    const double fx = f(x);
    if (i < n && fx <= 0.0 && positive_ok) {
      r.add("flux-positive", "f must be positive on (0,1)", x);
      positive_ok = false;
    }
    if (std::abs(fx - prev) > f.lipschitz() * h * (1.0 + 1e-9) + 1e-12 && lip_ok) {
      r.add("flux-lipschitz", "sampled slope exceeds declared Lipschitz constant", x);
      lip_ok = false;
    }
    prev = fx;
  }
  for (int i = 0; i + 2 <= n; ++i) {
    const double xm = (i + 1) * h;
    if (f(xm) < 0.5 * (f(i * h) + f((i + 2) * h)) - 1e-12 && concave_ok) {
      r.add("flux-concave", "midpoint concavity fails", xm);
      concave_ok = false;
    }
  }
  // Strict unimodality about the peak; ties are allowed only on the sample
  // pair straddling rho_bar (non-degeneracy elsewhere).
  for (int i = 0; i + 1 <= n; ++i) {
    const double a = i * h, b = (i + 1) * h;
    if (a <= f.peak_density() && b >= f.peak_density()) continue;
    const double d = f(b) - f(a);
    if (b <= f.peak_density() && d <= 0.0 && unimodal_ok) {
      r.add("flux-unimodal", "f must strictly increase left of the peak", b);
      unimodal_ok = false;
    }
    if (a >= f.peak_density() && d >= 0.0 && unimodal_ok) {
      r.add("flux-unimodal", "f must strictly decrease right of the peak", a);
      unimodal_ok = false;
    }
  }
}

void check_cost(const CostModel& c, int n, ValidationReport& r) {
  if (c.deriv_inf() <= 0.0)
    r.add("cost-deriv-inf", "cost derivative lower bound must be positive", c.deriv_inf());
  const double h = 1.0 / n;
  bool lower_ok = true, mono_ok = true, bounds_ok = true;
  for (int i = 0; i <= n; ++i) {
    const double x = i * h;
    if (c(x) < 1.0 - 1e-12 && lower_ok) {
      r.add("cost-lower-bound", "cost must satisfy c >= 1", x);
      lower_ok = false;
    }
  }
  for (int i = 0; i + 1 <= n; ++i) {
    const double a = i * h, b = (i + 1) * h;
    const double slope = (c(b) - c(a)) / h;
    if (slope < 0.0 && mono_ok) {
      r.add("cost-monotone", "cost not nondecreasing", b);
      mono_ok = false;
    }
    if ((slope < c.deriv_inf() - 1e-9 || slope > c.deriv_sup() + 1e-9) && bounds_ok) {
      r.add("cost-deriv-bounds", "sampled slope outside declared derivative bounds", b);
      bounds_ok = false;
    }
  }
}

void check_exit(const ConstrainedExit& e, const FluxModel& f, int n, ValidationReport& r) {
  if (!(e.sigma > 0.0 && e.sigma < 1.0))
    r.add("sigma-range", "sigma must lie in (0,1)", e.sigma);
  if (std::abs(e.w_left.total() - 1.0) > 1e-10)
    r.add("weight-left-normalized", "left weight must integrate to 1", e.w_left.total());
  if (std::abs(e.w_right.total() - 1.0) > 1e-10)
    r.add("weight-right-normalized", "right weight must integrate to 1", e.w_right.total());
  for (const WeightProfile* w : {&e.w_left, &e.w_right}) {
    const double h = (w->hi() - w->lo()) / n;
    for (int i = 0; i <= n; ++i) {
      if ((*w)(w->lo() + i * h) < -1e-14) {
        r.add("weight-nonnegative", "weight must be nonnegative", w->lo() + i * h);
        break;
      }
    }
  }
  const double h = 1.0 / n;
  bool mono_ok = true, range_ok = true;
  double prev = e.g(0.0);
  for (int i = 0; i <= n; ++i) {
    const double u = i * h;
    const double gu = e.g(u);
    if (gu <= 0.0 && range_ok) {
      r.add("limiter-range", "g must be positive", u);
      range_ok = false;
    }
    if (gu > f.peak_flux() + 1e-12 && range_ok) {
      r.add("limiter-range", "g exceeds f(rho_bar)", u);
      range_ok = false;
    }
    if (i > 0 && gu > prev + 1e-12 && mono_ok) {
      r.add("limiter-monotone", "g must be nonincreasing", u);
      mono_ok = false;
    }
    prev = gu;
  }
}

} // namespace

ValidationReport validate_scenario(const Scenario& s, int samples) {
  ValidationReport r;
  check_flux(s.flux, samples, r);
  check_cost(s.cost, samples, r);

  const bool constrained = std::holds_alternative<ConstrainedExit>(s.exit);
  if (constrained) check_exit(std::get<ConstrainedExit>(s.exit), s.flux, samples, r);

  for (const auto& seg : s.initial.segments()) {
    if (seg.from < -1.0 - 1e-14 || seg.to > 1.0 + 1e-14)
      r.add("initial-support", "initial datum must be supported in [-1,1]", seg.from);
    if (seg.value < 0.0 || seg.value > 1.0)
      r.add("initial-range", "initial density values must lie in [0,1]", seg.value);
  }

  const auto& num = s.numerics;
  if (!(num.t_end > 0.0)) r.add("numerics-horizon", "t_end must be positive", num.t_end);
  if (num.cells_j < 8) r.add("numerics-cells", "cells_j must be at least 8", num.cells_j);
  if (!(num.cfl_safety > 0.0 && num.cfl_safety <= 1.0))
    r.add("numerics-cfl-safety", "cfl_safety must lie in (0,1]", num.cfl_safety);
  if (!(num.b_dom > 1.0)) r.add("numerics-domain", "b_dom must exceed 1", num.b_dom);
  if (num.b_dom < 1.0 + s.flux.max_wave_speed() * num.t_end - 1e-12)
    r.add("domain-buffer", "b_dom must be at least 1 + L_f * t_end", num.b_dom);

  if (std::holds_alternative<MemoryOp>(s.turning)) {
    if (!(std::get<MemoryOp>(s.turning).delta > 0.0))
      r.add("memory-delta-positive", "memory rate delta must be positive",
            std::get<MemoryOp>(s.turning).delta);
  } else if (std::holds_alternative<RelaxedOp>(s.turning)) {
    if (!(std::get<RelaxedOp>(s.turning).epsilon > 0.0))
      r.add("relaxed-epsilon-positive", "relaxation time epsilon must be positive",
            std::get<RelaxedOp>(s.turning).epsilon);
  } else if (std::holds_alternative<EquilibriumOp>(s.turning)) {
    // The instantaneous equilibrium operator has a turning-curve Lipschitz
    // bound only for affine costs; general costs go through the memory or
    // relaxation operators.
    if (s.cost.kind() != CostModel::Kind::Affine)
      r.add("equilibrium-cost-affine",
            "equilibrium operator requires an affine cost; use memory or relaxed", 0.0);
  } else if (std::holds_alternative<FrozenOp>(s.turning)) {
    const auto& path = std::get<FrozenOp>(s.turning).path;
    if (path.times.empty() || path.times.size() != path.values.size()) {
      r.add("frozen-path-samples", "frozen path needs matching times/values samples", 0.0);
    } else {
      const double dx = 1.0 / num.cells_j;
      const double margin = num.b_dom - 2.0 * dx;
      for (size_t i = 0; i < path.values.size(); ++i) {
        if (std::abs(path.values[i]) > margin) {
          r.add("frozen-path-domain", "frozen path leaves the computational domain",
                path.values[i]);
          break;
        }
      }
      if (constrained) {
        for (size_t i = 0; i < path.values.size(); ++i) {
          if (std::abs(path.values[i]) >= 1.0) {
            r.add("frozen-path-interior",
                  "constrained mode requires the turning curve inside (-1,1)",
                  path.values[i]);
            break;
          }
        }
      }
    }
  }
  return r;
}

} // namespace hughes
