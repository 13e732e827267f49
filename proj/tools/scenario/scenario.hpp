#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cavity/occupation.hpp"
#include "cavity/schedule.hpp"
#include "cavity/types.hpp"

namespace cavity::scenario {

// bad config or bad command line; nothing has been written when this escapes
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// sweep with a force below the fit floor
class DegenerateFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Engine { exact, perturbative, sqrtlaw, softwall, oracle };

const char* engine_name(Engine e);
Engine parse_engine(const std::string& s);

struct OracleSettings {
  int grid_points = 2048;
  double dt = 1e-4;
  double y_max = 8.0;
  std::string geometry = "box";  // box | trap
};

struct SweepSettings {
  std::vector<double> velocities;
  bool paired = false;
  double t = 1.0;
};

struct ScenarioConfig {
  std::string wall_kind = "linear";  // fixed | linear | sqrt_law
  WallSchedule wall = WallSchedule::linear(1.0, 0.0);
  OccupationModel occupation = OccupationModel::zero_temperature(1);
  std::optional<int> level;  // single initial level; otherwise the filling
  std::string engine = "exact";  // one engine name or "all"
  std::optional<int> nmax;
  std::vector<double> times{1.0};
  EvalMode mode = EvalMode::instantaneous;
  std::string out_dir = "out";
  std::string prefix = "run";
  OracleSettings oracle;
  SweepSettings sweep;
  std::vector<double> roots_hbarB;
  int roots_nmax = 5;
};

// YAML text to config; throws ConfigError naming the offending key
ScenarioConfig parse_config(const std::string& yaml_text);
ScenarioConfig load_config(const std::string& path);

// engine preconditions; throws ConfigError
void validate(const ScenarioConfig& cfg, const std::string& command);

// engines actually run for cfg.engine ("all" expands to the hard-wall set)
std::vector<Engine> selected_engines(const ScenarioConfig& cfg, std::vector<std::string>* notes = nullptr);

int nmax_for(const ScenarioConfig& cfg, Engine e);

std::string schema_text();

// Results are kept in memory and written only after every engine finished.
struct Row {
  double t, L, Ldot, tau, energy, f_ad, f_nonad, f_total, f_fd, norm2;
  bool in_window;
  std::vector<double> raw;
};

struct EngineRun {
  Engine engine;
  std::vector<std::string> raw_labels;
  std::vector<Row> rows;
  std::string consistency_error;  // empty when every route check passed
  double max_route_dev = 0.0;     // max |F_fd - F| / |F| where available
};

struct RunResult {
  std::vector<EngineRun> runs;
  std::vector<std::string> notes;
};

RunResult run_engines(const ScenarioConfig& cfg);

// exit codes
constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_engine = 2;
constexpr int exit_consistency = 3;
constexpr int exit_degenerate = 4;

// subcommands; each returns an exit code and writes its files under out_dir
int cmd_run(const ScenarioConfig& cfg, const std::string& command);
int cmd_sweep(const ScenarioConfig& cfg);
int cmd_roots(const std::vector<double>& hbarB, int nmax, const std::string& out_dir, const std::string& prefix);
int cmd_jtable(int nmax, const std::string& out_dir, const std::string& prefix);

std::string format_double(double v);

}  // namespace cavity::scenario
