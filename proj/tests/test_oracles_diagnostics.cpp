#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hughes/diagnostics.hpp"
#include "hughes/riemann.hpp"

using namespace hughes;

namespace {

// Space-time conservation residual of the oracle over [a,b] x [t1,t2]:
// d/dt int rho + flux differences must cancel. Time integrals by midpoint
// sums over traces that stay smooth on the rectangle sides.
double conservation_residual(const RiemannSolution& sol, const FluxModel& f, double a,
                             double b, double t1, double t2, int steps = 4000) {
  const double dt = (t2 - t1) / steps;
  double flux_in = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double t = t1 + (k + 0.5) * dt;
    flux_in += dt * (f(sol(t, a)) - f(sol(t, b)));
  }
  const double dm = (sol.cell_average(t2, a, b) - sol.cell_average(t1, a, b)) * (b - a);
  return dm - flux_in;
}

Scenario riemann_scenario(double left, double right, double split) {
  Scenario s;
  s.flux = FluxModel::parabolic();
  s.cost = CostModel::affine(1.0);
  std::vector<InitialDatum::Segment> segs;
  if (left > 0.0) segs.push_back({-1.0, split, left});
  if (right > 0.0) segs.push_back({split, 1.0, right});
  s.initial = InitialDatum(segs);
  s.numerics.t_end = 0.5;
  s.numerics.cfl_safety = 0.5;
  s.numerics.b_dom = 2.0;
  FrozenOp f;
  f.path.times = {0.0, s.numerics.t_end};
  f.path.values = {-1.2, -1.2};
  s.turning = f;
  return s;
}

} // namespace

TEST_SUITE("oracles-diagnostics") {

TEST_CASE("riemann wave classification and speeds") {
  const FluxModel f = FluxModel::parabolic();

  const RiemannSolution shock = exact_lwr_riemann(0.0, 0.8, f);
  CHECK(shock.wave() == WaveType::Shock);
  CHECK(shock.shock_speed() == doctest::Approx(0.16 / 0.8).epsilon(1e-13));

  const RiemannSolution fan = exact_lwr_riemann(0.8, 0.0, f);
  CHECK(fan.wave() == WaveType::Rarefaction);
  CHECK(fan.fan_left() == doctest::Approx(-0.6).epsilon(1e-9));
  CHECK(fan.fan_right() == doctest::Approx(1.0).epsilon(1e-9));

  const RiemannSolution flat = exact_lwr_riemann(0.4, 0.4, f);
  CHECK(flat.wave() == WaveType::Constant);
  CHECK(flat(0.7, -0.2) == 0.4);
}

TEST_CASE("shock states on both sides of the jump") {
  const FluxModel f = FluxModel::parabolic();
  const RiemannSolution s = exact_lwr_riemann(0.1, 0.9, f);
  const double speed = s.shock_speed();
  CHECK(s(1.0, speed - 0.01) == 0.1);
  CHECK(s(1.0, speed + 0.01) == 0.9);
}

TEST_CASE("rarefaction evaluator is monotone in x/t") {
  const FluxModel f = FluxModel::parabolic();
  const RiemannSolution fan = exact_lwr_riemann(0.9, 0.1, f);
  double prev = fan(1.0, -2.0);
  for (int k = -40; k <= 40; ++k) {
    const double cur = fan(1.0, 0.05 * k);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
  // Inside the fan the value matches (f')^{-1}(x/t) = (1 - x/t)/2.
  for (double s : {-0.3, 0.0, 0.2, 0.5})
    CHECK(fan(1.0, s) == doctest::Approx(0.5 * (1.0 - s)).epsilon(1e-9));
}

TEST_CASE("oracle satisfies conservation on space-time rectangles") {
  const FluxModel f = FluxModel::parabolic();
  const RiemannSolution shock = exact_lwr_riemann(0.0, 0.8, f);
  CHECK(std::abs(conservation_residual(shock, f, -0.5, 1.0, 0.5, 1.0)) <= 1e-8);
  const RiemannSolution fan = exact_lwr_riemann(0.8, 0.0, f);
  CHECK(std::abs(conservation_residual(fan, f, -0.8, 1.2, 0.5, 1.0)) <= 1e-8);
  // A side running through the fan interior exercises the quadrature path.
  CHECK(std::abs(conservation_residual(fan, f, -0.2, 0.3, 0.5, 1.0)) <= 1e-8);
}

TEST_CASE("cell averages refine to the pointwise values") {
  const FluxModel f = FluxModel::parabolic();
  const RiemannSolution fan = exact_lwr_riemann(0.7, 0.2, f);
  const double t = 0.8, x = 0.1;
  double prev_err = 1.0;
  for (double h : {0.1, 0.01, 0.001}) {
    const double err = std::abs(fan.cell_average(t, x - h / 2, x + h / 2) - fan(t, x));
    CHECK(err <= prev_err + 1e-12); // refinement down to rounding noise
    prev_err = err;
  }
  CHECK(prev_err <= 1e-6);
}

TEST_CASE("l1 distance and total mass on a shared grid") {
  const std::vector<double> edges = {-1.0, -0.5, 0.0, 0.5, 1.0};
  const std::vector<double> zero = {0.0, 0.0, 0.0, 0.0};
  const std::vector<double> ones = {1.0, 1.0, 1.0, 1.0};
  CHECK(total_mass({edges, zero}) == 0.0);
  CHECK(total_mass({edges, ones}) == doctest::Approx(2.0).epsilon(1e-15));
  const std::vector<double> box = {0.0, 0.8, 0.0, 0.0}; // 0.8 on [-0.5, 0]
  CHECK(total_mass({edges, box}) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(l1_distance({edges, zero}, {edges, ones}) == doctest::Approx(2.0).epsilon(1e-15));

  const std::vector<double> other = {-1.0, 0.0, 1.0};
  const std::vector<double> two = {0.1, 0.2};
  CHECK_THROWS_AS(l1_distance({edges, zero}, {other, two}), std::invalid_argument);
}

TEST_CASE("lipschitz measurement of discrete paths") {
  TurningPath lin;
  lin.dt = 0.25;
  lin.xi = {0.0, 0.075, 0.15};
  lin.slopes = {0.3, 0.3};
  CHECK(measure_lipschitz(lin) == doctest::Approx(0.3).epsilon(1e-13));

  TurningPath flat;
  flat.dt = 0.5;
  flat.xi = {0.2, 0.2};
  flat.slopes = {0.0};
  CHECK(measure_lipschitz(flat) == 0.0);

  const TurningPath vee =
      discretize_path([](double t) { return std::abs(t - 0.5); }, 0.5, 2);
  CHECK(measure_lipschitz(vee) == doctest::Approx(1.0).epsilon(1e-15));

  TurningPath empty;
  empty.dt = 0.1;
  empty.xi = {0.0};
  CHECK_THROWS_AS(measure_lipschitz(empty), std::invalid_argument);
}

TEST_CASE("convergence study against the exact shock oracle") {
  // Pure advancing shock: datum (0, 0.8) split at x = -0.5, curve frozen te
  // the left of the support, so the rightward flux acts everywhere.
  Scenario s = riemann_scenario(0.0, 0.8, -0.5);
  // Waves: shock from -0.5 (speed 0.2), fan from +1. Measure on a window
  // around the shock only.
  const FluxModel flux = s.flux;
  std::vector<InitialDatum::Segment> segs = {{-0.5, 1.0, 0.8}};
  s.initial = InitialDatum(segs);
  const RiemannSolution shock = exact_lwr_riemann(0.0, 0.8, flux);
  const double t_end = s.numerics.t_end;
  ConvergenceOptions opts;
  opts.window_lo = -0.9;
  opts.window_hi = 0.1; // fan foot at 1 - 0.6*0.5 = 0.7 stays far away
  opts.threads = 2;
  const ReferenceSolution ref = [&](double a, double b) {
    return shock.cell_average(t_end, a + 0.5, b + 0.5);
  };
  const auto rows = convergence_study(s, {50, 100, 200}, ref, opts);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].error_l1 >= rows[1].error_l1);
  CHECK(rows[1].error_l1 >= rows[2].error_l1);
  CHECK(std::isnan(rows[0].observed_order));
  CHECK(rows[2].observed_order >= 0.8); // sharp shock: first order or better
}

TEST_CASE("convergence study against the exact rarefaction oracle") {
  Scenario s = riemann_scenario(0.8, 0.0, 0.0);
  std::vector<InitialDatum::Segment> segs = {{-1.0, 0.0, 0.8}};
  s.initial = InitialDatum(segs);
  const RiemannSolution fan = exact_lwr_riemann(0.8, 0.0, s.flux);
  const double t_end = s.numerics.t_end;
  ConvergenceOptions opts;
  opts.window_lo = -0.25; // shock from x=-1 sits near -0.9 at t=0.5
  opts.window_hi = 0.75;
  const ReferenceSolution ref = [&](double a, double b) {
    return fan.cell_average(t_end, a, b);
  };
  const auto rows = convergence_study(s, {100, 200, 400}, ref, opts);
  CHECK(rows[1].observed_order >= 0.7);
  CHECK(rows[1].observed_order <= 1.1);
  CHECK(rows[2].observed_order >= 0.7);
  CHECK(rows[2].observed_order <= 1.1);
}

TEST_CASE("self-referenced convergence for a coupled run") {
  Scenario s;
  s.flux = FluxModel::parabolic();
  s.cost = CostModel::affine(1.0);
  s.initial = InitialDatum({{-0.3, 0.6, 0.7}});
  s.numerics.t_end = 0.25;
  s.numerics.cfl_safety = 0.5;
  s.numerics.b_dom = 2.0;
  const auto rows = convergence_study(s, {25, 50, 100});
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].error_l1 <= rows[0].error_l1);
  CHECK(rows[2].error_l1 <= rows[1].error_l1);
}

} // TEST_SUITE
