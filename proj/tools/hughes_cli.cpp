#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hughes/coupled_driver.hpp"
#include "hughes/diagnostics.hpp"
#include "hughes/riemann.hpp"
#include "hughes/scenario_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;       // validation/config failure
constexpr int kExitNonConforming = 2; // run finished but clamp events occurred

hughes::Scenario load_checked(const std::string& config, int cells_override) {
  hughes::Scenario s = hughes::load_scenario(config);
  if (cells_override > 0) s.numerics.cells_j = cells_override;
  const hughes::ValidationReport report = hughes::validate_scenario(s);
  if (!report.ok()) throw hughes::ScenarioParseError(report.summary());
  return s;
}

int cmd_simulate(const std::string& config, int cells, const std::string& out_dir) {
  const hughes::Scenario s = load_checked(config, cells);
  const hughes::RunResult run = hughes::run_coupled(s);
  const hughes::RunManifest m = hughes::write_run_outputs(out_dir, s, run);
  std::cout << "wrote " << out_dir << " (hash " << m.hash << ", "
            << run.numerics.n_steps << " steps, clamp_events "
            << run.diagnostics.clamp_events << ")\n";
  return m.conforming ? kExitOk : kExitNonConforming;
}

int cmd_convergence(const std::string& config, std::vector<int> levels,
                    const std::string& out_dir) {
  const hughes::Scenario s = load_checked(config, 0);
  const auto rows = hughes::convergence_study(s, levels);
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream f(std::filesystem::path(out_dir) / "convergence.csv", std::ios::binary);
    hughes::write_convergence_csv(f, rows);
  }
  hughes::write_convergence_csv(std::cout, rows);
  return kExitOk;
}

int cmd_riemann(double left, double right, double vmax, double time, int samples) {
  const hughes::FluxModel flux = hughes::FluxModel::parabolic(vmax);
  const hughes::RiemannSolution sol = hughes::exact_lwr_riemann(left, right, flux);
  switch (sol.wave()) {
    case hughes::WaveType::Constant:
      std::cout << "# wave=constant\n";
      break;
    case hughes::WaveType::Shock:
      std::cout << "# wave=shock speed=" << hughes::format_double(sol.shock_speed()) << "\n";
      break;
    case hughes::WaveType::Rarefaction:
      std::cout << "# wave=rarefaction fan=[" << hughes::format_double(sol.fan_left()) << ","
                << hughes::format_double(sol.fan_right()) << "]\n";
      break;
  }
  std::cout << "x,rho\n";
  const double span = vmax * time + 0.5;
  for (int i = 0; i < samples; ++i) {
    const double x = -span + 2.0 * span * i / (samples - 1);
    std::cout << hughes::format_double(x) << ',' << hughes::format_double(sol(time, x))
              << '\n';
  }
  return kExitOk;
}

int cmd_picard(const std::string& config, int iters, double tol, int cells,
               const std::string& out_dir) {
  const hughes::Scenario s = load_checked(config, cells);
  const hughes::PicardResult result = hughes::picard_iterate(s, iters, tol);
  const hughes::RunManifest m = hughes::write_run_outputs(out_dir, s, result.final_run);
  std::cout << (result.converged ? "converged" : "not converged") << " after "
            << result.residuals.size() << " iteration(s); residuals:";
  for (double r : result.residuals) std::cout << ' ' << hughes::format_double(r);
  std::cout << "\nwrote " << out_dir << " (hash " << m.hash << ")\n";
  return m.conforming ? kExitOk : kExitNonConforming;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D pedestrian-evacuation corridor simulator (turning-curve model)"};
  app.require_subcommand(1);

  std::string config, out_dir = "out";
  int cells = 0;

  auto* simulate = app.add_subcommand("simulate", "run one scenario and write its outputs");
  simulate->add_option("--config", config, "scenario TOML file")->required();
  simulate->add_option("--cells", cells, "override cells per unit length (J)");
  simulate->add_option("--out", out_dir, "output directory");

  std::vector<int> levels;
  auto* convergence =
      app.add_subcommand("convergence", "mesh-refinement study over a list of levels");
  convergence->add_option("--config", config, "scenario TOML file")->required();
  convergence->add_option("--levels", levels, "comma-separated J levels")
      ->required()
      ->delimiter(',');
  convergence->add_option("--out", out_dir, "output directory");

  double left = 0.0, right = 0.0, vmax = 1.0, time = 1.0;
  int samples = 201;
  auto* riemann = app.add_subcommand("riemann", "tabulate an exact Riemann solution");
  riemann->add_option("--left", left, "left state")->required();
  riemann->add_option("--right", right, "right state")->required();
  riemann->add_option("--vmax", vmax, "flux scale (f = vmax rho (1-rho))");
  riemann->add_option("--time", time, "evaluation time");
  riemann->add_option("--samples", samples, "number of sample points");

  int iters = 25;
  double tol = 1e-8;
  auto* picard = app.add_subcommand("picard", "global fixed-point iteration mode");
  picard->add_option("--config", config, "scenario TOML file")->required();
  picard->add_option("--iters", iters, "maximum iterations");
  picard->add_option("--tol", tol, "sup-norm stopping tolerance");
  picard->add_option("--cells", cells, "override cells per unit length (J)");
  picard->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(config, cells, out_dir);
    if (convergence->parsed()) return cmd_convergence(config, levels, out_dir);
    if (riemann->parsed()) return cmd_riemann(left, right, vmax, time, samples);
    if (picard->parsed()) return cmd_picard(config, iters, tol, cells, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
