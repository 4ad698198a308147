#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kppfront/frontsolver.hpp"
#include "kppfront/pdesim.hpp"

namespace kppfront {

enum class ScenarioKind {
  Equilibria,
  Classify,
  Front2D,
  FrontFull,
  PdeRun,
  EpsSweep,
  DeltaSweep,
  FormulaAudit,
  TrappingCheck,
};

const char* to_string(ScenarioKind kind);

enum class ModelChoice { Case1, Case2, HT };
const char* to_string(ModelChoice model);

enum class InitialKind { Front, Equilibrium, Constant };
const char* to_string(InitialKind kind);

/// One configuration section. Settings a kind does not use keep their defaults.
struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::Equilibria;
  std::size_t line = 0;  // line of the section header

  ModelChoice model = ModelChoice::Case1;
  ModelParams params;
  std::optional<SystemId> system;  // defaulted from kind and model after parsing
  ShootingConfig shooting;

  // Classify
  std::optional<State> point;

  // PdeRun
  Grid1D grid{0.0, 200.0, 4001};
  double t_end = 20.0;
  bool comoving = false;
  SimulationOptions sim;
  InitialKind initial = InitialKind::Front;
  std::string equilibrium = "A";
  double u0 = kUnset, w0 = kUnset;
  std::optional<double> center;
  std::optional<SystemId> seed_system;
  std::size_t snapshot_stride = 1;
  bool estimate_speed = true;
  std::optional<double> level;
  double t_min = 0.0;

  // EpsSweep, DeltaSweep
  std::vector<double> values;
  bool full_system = false;
  double u1_transient = 0.0;

  // FormulaAudit
  std::size_t samples = 100;
  std::size_t kpp_samples = 20;
  int kpp_grid = 101;
  JacobianMethod method = JacobianMethod::ComplexStep;

  // TrappingCheck
  std::optional<double> b;
  std::optional<double> c_factor;  // c = c_factor * c*
  std::size_t seeds = 10000;
  double span = 1000.0;

  std::optional<std::uint64_t> seed;  // overrides the run-wide seed
};

enum class OutputFormat { Csv, Json, Both };

struct RunOptions {
  std::filesystem::path out = "kppfront_out";
  OutputFormat format = OutputFormat::Both;
  bool plot_data = false;
  unsigned jobs = 1;
  std::uint64_t seed = 0;
};

struct ScenarioOutcome {
  std::string name;
  ScenarioKind kind = ScenarioKind::Equilibria;
  bool ok = false;
  std::string error_code;  // empty on success
  std::string summary;     // one line, no timing
  double seconds = 0.0;
};

namespace cli {

/// Parses the INI-like scenario file. Throws ParseError (line and key in the
/// message) or ValidationError (scenario name and the violated invariant).
std::vector<Scenario> parse_config(std::string_view text);

/// Runs one scenario and writes <out>/<name>/. Never throws for scenario
/// failures; they are reported in the outcome and in result.json.
ScenarioOutcome run_scenario(const Scenario& s, const RunOptions& opt);

/// Runs all scenarios on a pool of opt.jobs workers, prints one summary line per
/// scenario to `summary` and appends timestamps to <out>/run.log. Returns the
/// process exit status: 0 iff every scenario succeeded.
int run(const std::vector<Scenario>& scenarios, const RunOptions& opt, std::ostream& summary);

/// KPPFRONT_OUT if set, otherwise ./kppfront_out.
std::filesystem::path default_output_root();

/// Levenshtein distance, used for "did you mean" suggestions.
std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace cli
}  // namespace kppfront
