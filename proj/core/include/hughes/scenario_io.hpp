#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hughes/corridor_model.hpp"
#include "hughes/diagnostics.hpp"
#include "hughes/fv_evolution.hpp"

namespace hughes {

struct ScenarioParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scenario files are TOML with sections [flux], [cost], [exit], [operator],
// [initial], [numerics]. The accepted subset covers scalar keys, numeric
// arrays and arrays of numeric inline tables; see the README for the schema.
Scenario parse_scenario(const std::string& toml_text);
Scenario load_scenario(const std::filesystem::path& file);

// Canonical serialization; parse(write(s)) == s with bit-exact floats.
// Throws for scenarios holding non-serializable custom callables.
std::string write_scenario(const Scenario& s);

// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

// FNV-1a hash of the canonical serialization, as fixed-width hex.
std::string scenario_hash(const Scenario& s);

// --- series writers (schemas pinned by golden tests) ---

// t,x_left,x_right,rho ; one row per uniform cell per stored snapshot.
void write_snapshots_csv(std::ostream& os, const RunResult& run);
// t,xi,slope ; one row per time level (the last row repeats the final slope).
void write_xi_csv(std::ostream& os, const TurningPath& path);
// t,q_left,q_right,exit_flux_left,exit_flux_right ; one row per slab.
void write_constraints_csv(std::ostream& os, const RunResult& run);
// J,dx,error_L1,observed_order ; order empty on the coarsest level.
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);

std::string diagnostics_json(const RunResult& run);

struct RunManifest {
  std::string status; // "running" then "completed"
  std::string hash;
  ResolvedNumerics numerics;
  std::vector<std::string> outputs;
  int clamp_events = 0;
  bool conforming = true;
};

std::string manifest_json(const RunManifest& m);

// Writes snapshots/xi/constraints/diagnostics/manifest into `dir` and returns
// the finalized manifest. The manifest is written before the file set (status
// "running") and rewritten after ("completed").
RunManifest write_run_outputs(const std::filesystem::path& dir, const Scenario& s,
                              const RunResult& run);

} // namespace hughes
