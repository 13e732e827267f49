#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cavity/errors.hpp"
#include "scenario.hpp"

namespace cavity::scenario {

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::exact: return "exact";
    case Engine::perturbative: return "perturbative";
    case Engine::sqrtlaw: return "sqrtlaw";
    case Engine::softwall: return "softwall";
    case Engine::oracle: return "oracle";
  }
  return "?";
}

Engine parse_engine(const std::string& s) {
  for (Engine e : {Engine::exact, Engine::perturbative, Engine::sqrtlaw, Engine::softwall, Engine::oracle})
    if (s == engine_name(e)) return e;
  throw ConfigError("unknown engine '" + s + "' (exact | perturbative | sqrtlaw | softwall | oracle | all)");
}

namespace {

void only_keys(const YAML::Node& n, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!n.IsMap()) throw ConfigError(where + ": expected a mapping");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T get(const YAML::Node& n, const std::string& key, const std::string& where) {
  try {
    return n[key].as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where + "." + key + ": bad value");
  }
}

double number(const YAML::Node& n, const std::string& key, const std::string& where) {
  const double v = get<double>(n, key, where);
  if (!std::isfinite(v)) throw ConfigError(where + "." + key + ": must be finite");
  return v;
}

void positive(double v, const std::string& what) {
  if (!(v > 0.0)) throw ConfigError(what + " must be positive, got " + format_double(v));
}

std::vector<double> number_list(const YAML::Node& n, const std::string& where) {
  if (!n.IsSequence()) throw ConfigError(where + ": expected a list");
  std::vector<double> out;
  for (const auto& x : n) {
    try {
      out.push_back(x.as<double>());
    } catch (const YAML::Exception&) {
      throw ConfigError(where + ": bad list entry");
    }
    if (!std::isfinite(out.back())) throw ConfigError(where + ": entries must be finite");
  }
  return out;
}

void parse_wall(const YAML::Node& w, ScenarioConfig& cfg) {
  only_keys(w, "wall", {"kind", "L0", "Ldot0", "a", "b", "c", "B2", "hbar"});
  cfg.wall_kind = w["kind"] ? get<std::string>(w, "kind", "wall") : "linear";
  const double hbar = w["hbar"] ? number(w, "hbar", "wall") : 1.0;
  positive(hbar, "wall.hbar");
  if (cfg.wall_kind == "fixed" || cfg.wall_kind == "linear") {
    if (w["a"] || w["b"] || w["c"] || w["B2"]) throw ConfigError("wall: a, b, c, B2 only apply to kind sqrt_law");
    const double L0 = w["L0"] ? number(w, "L0", "wall") : 1.0;
    positive(L0, "wall.L0");
    const double v = w["Ldot0"] ? number(w, "Ldot0", "wall") : 0.0;
    if (cfg.wall_kind == "fixed" && v != 0.0) throw ConfigError("wall: fixed wall cannot have Ldot0 != 0");
    cfg.wall = cfg.wall_kind == "fixed" ? WallSchedule::fixed(L0, hbar) : WallSchedule::linear(L0, v, hbar);
  } else if (cfg.wall_kind == "sqrt_law") {
    const bool abc = w["a"] || w["b"] || w["c"];
    const bool initial = w["L0"] || w["Ldot0"] || w["B2"];
    if (abc == initial) throw ConfigError("wall: sqrt_law takes either a, b, c or L0, Ldot0, B2");
    if (abc) {
      const double c = w["c"] ? number(w, "c", "wall") : 1.0;
      positive(c, "wall.c");
      cfg.wall = WallSchedule::sqrt_law(w["a"] ? number(w, "a", "wall") : 0.0, w["b"] ? number(w, "b", "wall") : 0.0, c,
                                        hbar);
    } else {
      const double L0 = w["L0"] ? number(w, "L0", "wall") : 1.0;
      positive(L0, "wall.L0");
      cfg.wall = WallSchedule::sqrt_law_from_initial(L0, w["Ldot0"] ? number(w, "Ldot0", "wall") : 0.0,
                                                     w["B2"] ? number(w, "B2", "wall") : 0.0, hbar);
    }
  } else {
    throw ConfigError("wall.kind: expected fixed | linear | sqrt_law, got '" + cfg.wall_kind + "'");
  }
}

void parse_occupation(const YAML::Node& o, ScenarioConfig& cfg) {
  only_keys(o, "occupation", {"mode", "N", "beta", "mu"});
  const auto mode = o["mode"] ? get<std::string>(o, "mode", "occupation") : "zero_temperature";
  if (mode == "zero_temperature") {
    if (o["beta"] || o["mu"]) throw ConfigError("occupation: beta, mu only apply to mode fermi_dirac");
    const int N = o["N"] ? get<int>(o, "N", "occupation") : 1;
    if (N < 1) throw ConfigError("occupation.N must be >= 1");
    cfg.occupation = OccupationModel::zero_temperature(N);
  } else if (mode == "fermi_dirac") {
    if (o["N"]) throw ConfigError("occupation: N only applies to mode zero_temperature");
    if (!o["beta"] || !o["mu"]) throw ConfigError("occupation: fermi_dirac needs beta and mu");
    const double beta = number(o, "beta", "occupation");
    positive(beta, "occupation.beta");
    cfg.occupation = OccupationModel::fermi_dirac(beta, number(o, "mu", "occupation"));
  } else {
    throw ConfigError("occupation.mode: expected zero_temperature | fermi_dirac, got '" + mode + "'");
  }
}

void parse_time(const YAML::Node& t, ScenarioConfig& cfg) {
  only_keys(t, "time", {"start", "stop", "samples", "values"});
  if (t["values"]) {
    if (t["start"] || t["stop"] || t["samples"]) throw ConfigError("time: give either values or start/stop/samples");
    cfg.times = number_list(t["values"], "time.values");
    return;
  }
  const double start = t["start"] ? number(t, "start", "time") : 0.0;
  const double stop = t["stop"] ? number(t, "stop", "time") : start;
  const int samples = t["samples"] ? get<int>(t, "samples", "time") : 1;
  if (samples < 1) throw ConfigError("time.samples must be >= 1");
  if (stop < start) throw ConfigError("time.stop must not precede time.start");
  cfg.times.clear();
  for (int i = 0; i < samples; ++i)
    cfg.times.push_back(samples == 1 ? start : start + (stop - start) * i / (samples - 1));
}

}  // namespace

ScenarioConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  ScenarioConfig cfg;
  if (root.IsNull()) return cfg;
  only_keys(root, "config",
            {"wall", "occupation", "level", "engine", "nmax", "time", "mode", "output", "oracle", "sweep", "roots"});
  try {
    if (root["wall"]) parse_wall(root["wall"], cfg);
    if (root["occupation"]) parse_occupation(root["occupation"], cfg);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (root["level"]) cfg.level = get<int>(root, "level", "config");
  if (root["engine"]) cfg.engine = get<std::string>(root, "engine", "config");
  if (root["nmax"]) cfg.nmax = get<int>(root, "nmax", "config");
  if (root["time"]) parse_time(root["time"], cfg);
  if (root["mode"]) {
    const auto m = get<std::string>(root, "mode", "config");
    if (m == "instantaneous")
      cfg.mode = EvalMode::instantaneous;
    else if (m == "time_averaged")
      cfg.mode = EvalMode::time_averaged;
    else
      throw ConfigError("mode: expected instantaneous | time_averaged, got '" + m + "'");
  }
  if (const auto out = root["output"]) {
    only_keys(out, "output", {"dir", "prefix"});
    if (out["dir"]) cfg.out_dir = get<std::string>(out, "dir", "output");
    if (out["prefix"]) cfg.prefix = get<std::string>(out, "prefix", "output");
  }
  if (const auto o = root["oracle"]) {
    only_keys(o, "oracle", {"grid_points", "dt", "y_max", "geometry"});
    if (o["grid_points"]) cfg.oracle.grid_points = get<int>(o, "grid_points", "oracle");
    if (o["dt"]) cfg.oracle.dt = number(o, "dt", "oracle");
    if (o["y_max"]) cfg.oracle.y_max = number(o, "y_max", "oracle");
    if (o["geometry"]) cfg.oracle.geometry = get<std::string>(o, "geometry", "oracle");
  }
  if (const auto s = root["sweep"]) {
    only_keys(s, "sweep", {"velocities", "paired", "t"});
    if (s["velocities"]) cfg.sweep.velocities = number_list(s["velocities"], "sweep.velocities");
    if (s["paired"]) cfg.sweep.paired = get<bool>(s, "paired", "sweep");
    if (s["t"]) cfg.sweep.t = number(s, "t", "sweep");
  }
  if (const auto r = root["roots"]) {
    only_keys(r, "roots", {"hbarB", "nmax"});
    if (r["hbarB"]) cfg.roots_hbarB = number_list(r["hbarB"], "roots.hbarB");
    if (r["nmax"]) cfg.roots_nmax = get<int>(r, "nmax", "roots");
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<Engine> selected_engines(const ScenarioConfig& cfg, std::vector<std::string>* notes) {
  if (cfg.engine != "all") return {parse_engine(cfg.engine)};
  std::vector<Engine> out{Engine::exact};
  auto note = [&](const std::string& s) {
    if (notes) notes->push_back(s);
  };
  if (cfg.level && *cfg.level != 1)
    note("perturbative skipped: it needs an occupation, not a single level");
  else
    out.push_back(Engine::perturbative);
  out.push_back(Engine::sqrtlaw);
  if (cfg.mode == EvalMode::instantaneous)
    out.push_back(Engine::oracle);
  else
    note("oracle skipped: it has no time-averaged mode");
  note("softwall not part of 'all': it models a harmonic trap, not the hard-wall scenario");
  return out;
}

int nmax_for(const ScenarioConfig& cfg, Engine e) {
  if (cfg.nmax) return *cfg.nmax;
  return e == Engine::perturbative ? 512 : 64;
}

void validate(const ScenarioConfig& cfg, const std::string& command) {
  if (cfg.prefix.empty() || cfg.prefix.find('/') != std::string::npos)
    throw ConfigError("output.prefix must be a plain file-name stem");
  if (cfg.out_dir.empty()) throw ConfigError("output.dir must not be empty");
  if (cfg.nmax && *cfg.nmax < 2) throw ConfigError("nmax must be >= 2");
  if (cfg.times.empty()) throw ConfigError("time: no samples");
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    if (cfg.times[i] < 0.0) throw ConfigError("time: samples must be >= 0");
    if (i && cfg.times[i] < cfg.times[i - 1]) throw ConfigError("time: samples must be non-decreasing");
    if (!(cfg.times[i] < zero_crossing_time(cfg.wall)))
      throw ConfigError("time: sample t = " + format_double(cfg.times[i]) + " reaches the wall collapse at t = " +
                        format_double(zero_crossing_time(cfg.wall)));
  }
  const bool hard = cfg.wall_kind != "sqrt_law";
  if (cfg.engine != "all") parse_engine(cfg.engine);
  for (Engine e : selected_engines(cfg)) {
    const std::string name = engine_name(e);
    const int nmax = nmax_for(cfg, e);
    switch (e) {
      case Engine::exact:
      case Engine::perturbative:
        if (!hard) throw ConfigError(name + " engine needs a fixed or linear wall; use sqrtlaw for sqrt_law");
        break;
      case Engine::softwall:
        if (!hard) throw ConfigError("softwall engine needs a fixed or linear wall");
        break;
      case Engine::sqrtlaw:
      case Engine::oracle:
        break;
    }
    if (e == Engine::perturbative && cfg.level && *cfg.level != 1)
      throw ConfigError("perturbative engine works with the occupation; drop 'level'");
    if (e == Engine::oracle) {
      if (cfg.mode != EvalMode::instantaneous) throw ConfigError("oracle engine only supports mode instantaneous");
      if (cfg.oracle.geometry != "box" && cfg.oracle.geometry != "trap")
        throw ConfigError("oracle.geometry: expected box | trap");
      if (cfg.oracle.geometry == "trap" && !hard) throw ConfigError("oracle trap geometry needs a fixed or linear wall");
      if (cfg.oracle.grid_points < 8) throw ConfigError("oracle.grid_points must be >= 8");
      positive(cfg.oracle.dt, "oracle.dt");
      positive(cfg.oracle.y_max, "oracle.y_max");
    }
    if (cfg.level) {
      const int lo = (e == Engine::softwall || (e == Engine::oracle && cfg.oracle.geometry == "trap")) ? 0 : 1;
      if (*cfg.level < lo) throw ConfigError("level must be >= " + std::to_string(lo) + " for engine " + name);
      if (e != Engine::oracle && *cfg.level + (lo == 0 ? 1 : 0) > nmax)
        throw ConfigError("level exceeds nmax for engine " + name);
    }
    if (cfg.occupation.mode == OccupationModel::Mode::zero_temperature && !cfg.level && e != Engine::oracle &&
        cfg.occupation.N > nmax)
      throw ConfigError("occupation.N exceeds nmax for engine " + name);
  }
  if (command == "sweep") {
    const auto& v = cfg.sweep.velocities;
    if (cfg.engine == "all") throw ConfigError("sweep runs a single engine");
    if (cfg.wall_kind == "fixed") throw ConfigError("sweep needs a moving wall kind (linear or sqrt_law)");
    if (v.size() < 4) throw ConfigError("sweep.velocities: need at least 4 values");
    double lo = 1e300, hi = 0.0;
    for (double x : v) {
      if (x == 0.0) throw ConfigError("sweep.velocities: zero velocity has no non-adiabatic force");
      lo = std::min(lo, std::abs(x));
      hi = std::max(hi, std::abs(x));
    }
    if (hi < 10.0 * lo) throw ConfigError("sweep.velocities: must span at least one decade");
    if (cfg.sweep.t < 0.0) throw ConfigError("sweep.t must be >= 0");
  }
}

std::string schema_text() {
  return R"(# cavity scenario file (YAML). Every key is optional; defaults shown.
wall:
  kind: linear        # fixed | linear | sqrt_law
  L0: 1.0             # fixed, linear, sqrt_law (with Ldot0, B2)
  Ldot0: 0.0          # linear, sqrt_law
  # B2: 0.0           # sqrt_law: b^2 - 4ac, alternative to a, b, c
  # a: 0.0            # sqrt_law: L(t)^2 = a t^2 + b t + c
  # b: 0.0
  # c: 1.0
  hbar: 1.0
occupation:
  mode: zero_temperature   # zero_temperature | fermi_dirac
  N: 1                     # zero_temperature: lowest N levels
  # beta: 1.0              # fermi_dirac
  # mu: 0.0                # fermi_dirac
# level: 1            # single initial level instead of the occupation
                      # (>= 1 hard wall, >= 0 soft wall)
engine: exact         # exact | perturbative | sqrtlaw | softwall | oracle | all
# nmax: 64            # basis size; default 64, perturbative 512
time:                 # default: a single sample at t = 1.0
  # start: 0.0        # either start/stop/samples (stop defaults to start) ...
  # stop: 2.0
  # samples: 9
  values: [1.0]       # ... or an explicit list
mode: instantaneous   # instantaneous | time_averaged
output:
  dir: out
  prefix: run
oracle:
  grid_points: 2048
  dt: 1.0e-4
  y_max: 8.0          # trap half-width in scaled units
  geometry: box       # box | trap
sweep:
  velocities: []      # >= 4 values spanning >= 1 decade
  paired: false       # also run -Ldot0 and compare prefactors
  t: 1.0              # evaluation time (instantaneous mode)
roots:
  hbarB: []           # values of hbar*B for the roots table
  nmax: 5
)";
}

}  // namespace cavity::scenario
