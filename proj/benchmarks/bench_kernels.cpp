#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "hughes/coupled_driver.hpp"
#include "hughes/fv_evolution.hpp"
#include "hughes/godunov.hpp"
#include "hughes/turning_operators.hpp"

using namespace hughes;

namespace {

Scenario bench_scenario(int cells_j) {
  Scenario s;
  s.flux = FluxModel::parabolic();
  s.cost = CostModel::affine(1.0);
  s.initial = InitialDatum({{-0.5, 0.5, 0.8}});
  s.numerics.t_end = 1.0;
  s.numerics.cells_j = cells_j;
  s.numerics.cfl_safety = 0.5;
  s.numerics.b_dom = 3.0;
  return s;
}

std::vector<double> random_states(size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

void BM_GodunovRight(benchmark::State& state) {
  const FluxModel f = FluxModel::parabolic();
  const ShiftedFlux g(f, Side::Right, 0.0);
  const auto a = random_states(1024, 1), b = random_states(1024, 2);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(godunov(a[i & 1023], b[i & 1023], g));
    ++i;
  }
}
BENCHMARK(BM_GodunovRight);

void BM_InterfaceFlux(benchmark::State& state) {
  const FluxModel f = FluxModel::parabolic();
  const auto a = random_states(256, 3), b = random_states(256, 4);
  const auto s = random_states(256, 5);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        interface_flux(a[i & 255], b[i & 255], f, 0.8 * (s[i & 255] - 0.5)));
    ++i;
  }
}
BENCHMARK(BM_InterfaceFlux);

void BM_EquilibriumXi(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  std::vector<double> edges(cells + 1), values = random_states(cells, 7);
  for (int i = 0; i <= cells; ++i) edges[i] = -1.0 + 2.0 * i / cells;
  const CostModel cost = CostModel::affine(1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(equilibrium_xi({edges, values}, cost));
}
BENCHMARK(BM_EquilibriumXi)->Arg(200)->Arg(800);

void BM_CoupledSlabStep(benchmark::State& state) {
  const Scenario s = bench_scenario(static_cast<int>(state.range(0)));
  const double r = xi_slope_bound(s.turning, s.flux, s.cost);
  const ResolvedNumerics num = resolve_numerics(s.numerics, s.flux, r);
  const XiSupplier supplier = make_operator_supplier(s, num);
  SlabStepper st(s, num, initial_xi(s));
  for (auto _ : state) {
    if (st.finished()) {
      state.PauseTiming();
      st = SlabStepper(s, num, initial_xi(s));
      state.ResumeTiming();
    }
    step_coupled(st, supplier);
  }
  state.SetItemsProcessed(state.iterations() * (2 * num.half_cells - 1));
}
BENCHMARK(BM_CoupledSlabStep)->Arg(100)->Arg(400);

void BM_FullRun(benchmark::State& state) {
  const Scenario s = bench_scenario(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const RunResult run = run_coupled(s);
    benchmark::DoNotOptimize(run.diagnostics.mass_series.back());
  }
}
BENCHMARK(BM_FullRun)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
