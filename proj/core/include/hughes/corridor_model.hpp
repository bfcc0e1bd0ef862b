#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hughes {

/// Concave flux f on [0,1] with f(0) = f(1) = 0, known peak location and
/// Lipschitz constant. The corridor uses the pair f_L = -left_scale * f (left
/// of the turning curve) and f_R = +right_scale * f (right of it); unequal
/// scales model a slanted corridor.
class FluxModel {
 public:
  enum class Kind { Parabolic, Tabulated, Custom };

  // vmax * rho * (1 - rho)
  static FluxModel parabolic(double vmax = 1.0, double left_scale = 1.0,
                             double right_scale = 1.0);
  // Piecewise-linear interpolation of `values` on the uniform grid of [0,1].
  static FluxModel tabulated(std::vector<double> values, double left_scale = 1.0,
                             double right_scale = 1.0);
  // Arbitrary callable; caller supplies peak density and Lipschitz constant.
  // Not serializable to scenario files.
  static FluxModel custom(std::function<double(double)> f, double peak_density,
                          double lipschitz, double left_scale = 1.0,
                          double right_scale = 1.0);

  double operator()(double rho) const;
  double peak_density() const { return peak_; }   // rho_bar
  double peak_flux() const { return peak_flux_; } // sup f
  double lipschitz() const { return lipschitz_; }
  double left_scale() const { return left_scale_; }
  double right_scale() const { return right_scale_; }

  // Bounds for the actual (scaled) flux pair, used by CFL and a-priori
  // estimates.
  double max_wave_speed() const;     // max(v_L, v_R) * lipschitz
  double max_flux_magnitude() const; // max(v_L, v_R) * sup f

  Kind kind() const { return kind_; }
  double vmax() const { return vmax_; } // parabolic only
  const std::vector<double>& table() const { return table_; }

 private:
  FluxModel() = default;
  Kind kind_ = Kind::Parabolic;
  std::function<double(double)> eval_;
  double peak_ = 0.5;
  double peak_flux_ = 0.25;
  double lipschitz_ = 1.0;
  double left_scale_ = 1.0;
  double right_scale_ = 1.0;
  double vmax_ = 1.0;
  std::vector<double> table_;
};

/// Congestion cost c on [0,1]: c >= 1 and nondecreasing, with finite
/// derivative bounds.
class CostModel {
 public:
  enum class Kind { Affine, Tabulated };

  static CostModel affine(double alpha); // 1 + alpha * rho, alpha > 0
  static CostModel tabulated(std::vector<double> values);

  double operator()(double rho) const;
  double deriv_sup() const { return deriv_sup_; } // alpha_bar
  double deriv_inf() const { return deriv_inf_; } // alpha_underbar
  double max_cost() const;                        // c(1) for nondecreasing c

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  const std::vector<double>& table() const { return table_; }

 private:
  Kind kind_ = Kind::Affine;
  double alpha_ = 1.0;
  std::vector<double> table_;
  double deriv_sup_ = 1.0;
  double deriv_inf_ = 1.0;
};

// 1 + alpha * rho with derivative bounds alpha. Throws std::invalid_argument
// for alpha <= 0.
CostModel affine_cost(double alpha);

/// Nonincreasing flux limiter g, tabulated on the uniform grid of [0,1]
/// (its argument is a weighted density average, hence in [0,1]); constant
/// extension outside.
class Limiter {
 public:
  static Limiter constant(double value);
  static Limiter tabulated(std::vector<double> values);
  double operator()(double u) const;
  const std::vector<double>& table() const { return values_; }

 private:
  std::vector<double> values_;
};

/// Nonnegative weight on [lo,hi] integrating to one. Either uniform or a
/// piecewise-linear table on the uniform grid of [lo,hi].
class WeightProfile {
 public:
  static WeightProfile uniform(double lo, double hi);
  static WeightProfile tabulated(double lo, double hi, std::vector<double> values);
  double operator()(double x) const;          // 0 outside [lo,hi]
  double integral(double a, double b) const;  // exact piecewise-linear integral
  double total() const { return integral(lo_, hi_); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool is_uniform() const { return values_.empty(); }
  const std::vector<double>& table() const { return values_; }

 private:
  double lo_ = 0.0, hi_ = 1.0;
  std::vector<double> values_; // empty => uniform
};

struct OpenExit {};

struct ConstrainedExit {
  double sigma = 0.5;   // exits feel density on (sigma,1) and (-1,-sigma)
  Limiter g;            // common limiter for both exits
  WeightProfile w_left; // on [-1,-sigma]
  WeightProfile w_right; // on [sigma,1]
};

using ExitModel = std::variant<OpenExit, ConstrainedExit>;

/// Piecewise-constant initial density supported in [-1,1], zero elsewhere.
class InitialDatum {
 public:
  struct Segment {
    double from, to, value;
  };

  InitialDatum() = default;
  explicit InitialDatum(std::vector<Segment> segments);

  double operator()(double x) const;       // half-open segments [from,to)
  double average(double a, double b) const; // exact cell average
  const std::vector<Segment>& segments() const { return segments_; }

 private:
  std::vector<Segment> segments_; // sorted, non-overlapping
};

struct FrozenPathSpec {
  // Piecewise-linear samples of the prescribed turning curve.
  std::vector<double> times;
  std::vector<double> values;
  double value_at(double t) const;
  double slope_bound() const;
};

struct EquilibriumOp {};
struct MemoryOp {
  double delta = 1.0;
};
struct RelaxedOp {
  double epsilon = 1.0;
  // Integrates the relaxation ODE with the opposite sign (relaxation towards
  // the balance point instead of the model's written form). Experimental.
  bool flip_sign = false;
};
struct FrozenOp {
  FrozenPathSpec path;
};

using TurningOperatorSpec = std::variant<EquilibriumOp, MemoryOp, RelaxedOp, FrozenOp>;

struct Numerics {
  double t_end = 1.0;
  int cells_j = 100;        // cells per unit length, dx = 1/J
  double cfl_safety = 0.5;  // in (0,1]
  double b_dom = 2.0;       // computational domain [-b_dom, b_dom]
  int snapshots = 64;       // target snapshot count for file output
};

struct Scenario {
  FluxModel flux = FluxModel::parabolic();
  CostModel cost = CostModel::affine(1.0);
  ExitModel exit = OpenExit{};
  TurningOperatorSpec turning = EquilibriumOp{};
  InitialDatum initial;
  Numerics numerics;
};

struct Violation {
  std::string hypothesis; // short identifier of the violated condition
  std::string message;    // human-readable detail
  double witness = 0.0;   // sample point exhibiting the violation
};

class ValidationReport {
 public:
  bool ok() const { return violations_.empty(); }
  const std::vector<Violation>& violations() const { return violations_; }
  void add(std::string hypothesis, std::string message, double witness = 0.0);
  std::string summary() const;

 private:
  std::vector<Violation> violations_;
};

/// Checks every model hypothesis by dense sampling (grid of `samples` points)
/// and all scenario-level constraints. The scenario is usable iff the report
/// is empty.
ValidationReport validate_scenario(const Scenario& s, int samples = 1000);

} // namespace hughes
