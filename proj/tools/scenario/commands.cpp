#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>

#include "cavity/errors.hpp"
#include "cavity/hardwall.hpp"
#include "cavity/kummer.hpp"
#include "cavity/perturbative.hpp"
#include "json.hpp"
#include "scenario.hpp"

namespace cavity::scenario {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json jnum(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string csv(const EngineRun& run) {
  std::string s = "t,L,Ldot,tau,E,F_ad,F_nonad,F_total,F_fd,norm2,in_window";
  for (const auto& l : run.raw_labels) s += "," + l;
  s += ",engine\n";
  for (const auto& r : run.rows) {
    for (double v : {r.t, r.L, r.Ldot, r.tau, r.energy, r.f_ad, r.f_nonad, r.f_total, r.f_fd, r.norm2})
      s += format_double(v) + ",";
    s += r.in_window ? "1" : "0";
    for (double v : r.raw) s += "," + format_double(v);
    s += std::string(",") + engine_name(run.engine) + "\n";
  }
  return s;
}

json config_echo(const ScenarioConfig& cfg) {
  json w{{"kind", cfg.wall_kind}, {"L0", cfg.wall.L0}, {"Ldot0", cfg.wall.Ldot0}, {"a", cfg.wall.a},
         {"b", cfg.wall.b},       {"c", cfg.wall.c},   {"B2", cfg.wall.B2()},       {"hbar", cfg.wall.hbar}};
  json occ;
  if (cfg.occupation.mode == OccupationModel::Mode::zero_temperature)
    occ = {{"mode", "zero_temperature"}, {"N", cfg.occupation.N}};
  else
    occ = {{"mode", "fermi_dirac"}, {"beta", cfg.occupation.beta}, {"mu", cfg.occupation.mu}};
  json times = json::array();
  for (double t : cfg.times) times.push_back(t);
  return {{"wall", w},
          {"occupation", occ},
          {"level", cfg.level ? json(*cfg.level) : json(nullptr)},
          {"engine", cfg.engine},
          {"nmax", cfg.nmax ? json(*cfg.nmax) : json(nullptr)},
          {"times", times},
          {"mode", cfg.mode == EvalMode::instantaneous ? "instantaneous" : "time_averaged"},
          {"oracle",
           {{"grid_points", cfg.oracle.grid_points},
            {"dt", cfg.oracle.dt},
            {"y_max", cfg.oracle.y_max},
            {"geometry", cfg.oracle.geometry}}}};
}

json coefficient_block(const ScenarioConfig& cfg) {
  json out;
  const bool hard = cfg.wall_kind != "sqrt_law";
  if (!hard || cfg.level) return nullptr;
  double C = std::nan(""), Cp = std::nan("");
  try {
    C = coefficient_C(cfg.occupation, 10000, cfg.wall.hbar, cfg.wall.L0).value;
    out["C"] = C;
  } catch (const std::exception& e) {
    out["C"] = nullptr;
    out["C_error"] = e.what();
  }
  try {
    Cp = nonadiabatic_coefficient_exact(cfg.occupation, 10000, cfg.wall.hbar, cfg.wall.L0).value;
    out["C_prime"] = Cp;
  } catch (const std::exception& e) {
    out["C_prime"] = nullptr;
    out["C_prime_error"] = e.what();
  }
  out["ratio_C_prime_over_C"] = jnum(Cp / C);
  return out;
}

// max relative deviations of every run against the reference run
json comparison(const RunResult& res) {
  const EngineRun* ref = nullptr;
  for (const auto& r : res.runs)
    if (r.engine == Engine::exact) ref = &r;
  if (!ref && !res.runs.empty()) ref = &res.runs.front();
  if (!ref || res.runs.size() < 2) return nullptr;
  json out{{"reference", engine_name(ref->engine)}, {"engines", json::object()}};
  double nonad_scale = 0.0;
  for (const auto& r : ref->rows) nonad_scale = std::max(nonad_scale, std::abs(r.f_nonad));
  for (const auto& run : res.runs) {
    if (&run == ref) continue;
    double dE = 0.0, dF = 0.0, dN = 0.0;
    const std::size_t n = std::min(run.rows.size(), ref->rows.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto &a = run.rows[i], &b = ref->rows[i];
      dE = std::max(dE, std::abs(a.energy - b.energy) / std::abs(b.energy));
      dF = std::max(dF, std::abs(a.f_total - b.f_total) / std::abs(b.f_total));
      if (nonad_scale > 0.0) dN = std::max(dN, std::abs(a.f_nonad - b.f_nonad) / nonad_scale);
    }
    out["engines"][engine_name(run.engine)] = {{"samples", n},
                                               {"max_rel_dev_energy", dE},
                                               {"max_rel_dev_force_total", dF},
                                               {"max_rel_dev_force_nonadiabatic", nonad_scale > 0 ? json(dN) : json(nullptr)}};
  }
  return out;
}

void prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y, double* intercept) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (intercept) *intercept = (sy - slope * sx) / n;
  return slope;
}

}  // namespace

int cmd_run(const ScenarioConfig& cfg, const std::string& command) {
  RunResult res;
  try {
    res = run_engines(cfg);
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    return exit_consistency;
  }
  prepare_dir(cfg.out_dir);
  json summary;
  summary["tool"] = "cavity";
  summary["version"] = "0.1.0";
  summary["command"] = command;
  summary["config"] = config_echo(cfg);
  summary["engines"] = json::object();
  bool consistent = true;
  std::size_t outside = 0;
  for (const auto& run : res.runs) {
    const std::string name = engine_name(run.engine);
    const std::string file = cfg.prefix + "_" + name + ".csv";
    write_file(fs::path(cfg.out_dir) / file, csv(run));
    double deficit = 0.0, coeff = std::nan("");
    std::size_t out_here = 0;
    for (const auto& r : run.rows) {
      if (!r.in_window) ++out_here;
      if (run.engine != Engine::perturbative && run.engine != Engine::oracle)
        deficit = std::max(deficit, std::abs(1.0 - r.norm2 / run.rows.front().norm2));
    }
    if (cfg.mode == EvalMode::time_averaged && !run.rows.empty() && cfg.wall.Ldot0 != 0.0)
      coeff = run.rows.front().f_nonad * cfg.wall.L0 / (cfg.wall.Ldot0 * cfg.wall.Ldot0);
    outside = std::max(outside, out_here);
    json e{{"csv", file},
           {"rows", run.rows.size()},
           {"route_check", run.consistency_error.empty() ? "pass" : "fail"},
           {"max_route_rel_dev", run.engine == Engine::perturbative || run.engine == Engine::oracle
                                     ? json(nullptr)
                                     : json(run.max_route_dev)},
           {"max_norm_drift", deficit},
           {"samples_outside_window", out_here},
           {"F_nonad_L0_over_Ldot0_sq", jnum(coeff)}};
    if (!run.consistency_error.empty()) {
      e["error"] = run.consistency_error;
      consistent = false;
    }
    summary["engines"][name] = e;
  }
  summary["window_warning"] = cfg.mode == EvalMode::instantaneous && outside > 0;
  summary["coefficients"] = coefficient_block(cfg);
  summary["comparison"] = comparison(res);
  summary["notes"] = res.notes;
  write_file(fs::path(cfg.out_dir) / (cfg.prefix + "_summary.json"), summary.dump(2) + "\n");
  if (summary["window_warning"].get<bool>())
    std::cerr << "warning: " << outside << " sample(s) outside the validity window (see summary)\n";
  if (!consistent) {
    std::cerr << "consistency failure: operator and energy routes disagree (see summary)\n";
    return exit_consistency;
  }
  return exit_ok;
}

int cmd_sweep(const ScenarioConfig& base) {
  const Engine engine = parse_engine(base.engine);
  auto nonad = [&](double v) {
    ScenarioConfig cfg = base;
    cfg.wall = base.wall.kind == WallSchedule::Kind::sqrt_law
                   ? WallSchedule::sqrt_law_from_initial(base.wall.L0, v, base.wall.B2(), base.wall.hbar)
                   : WallSchedule::linear(base.wall.L0, v, base.wall.hbar);
    cfg.times = {base.sweep.t};
    cfg.engine = engine_name(engine);
    const auto res = run_engines(cfg);
    const auto& run = res.runs.front();
    if (!run.consistency_error.empty()) throw ConsistencyError(run.consistency_error);
    return run.rows.front().f_nonad;
  };
  const auto& vs = base.sweep.velocities;
  std::vector<std::future<double>> fwd, rev;
  for (double v : vs) {
    fwd.push_back(std::async(std::launch::async, nonad, v));
    if (base.sweep.paired) rev.push_back(std::async(std::launch::async, nonad, -v));
  }
  std::vector<double> F, Fr, lx, ly;
  try {
    for (auto& f : fwd) F.push_back(f.get());
    for (auto& f : rev) Fr.push_back(f.get());
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    return exit_consistency;
  }
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (std::abs(F[i]) < 1e-14)
      throw DegenerateFitError("F_nonad = " + format_double(F[i]) + " below the 1e-14 fit floor at Ldot0 = " +
                               format_double(vs[i]));
    lx.push_back(std::log(std::abs(vs[i])));
    ly.push_back(std::log(std::abs(F[i])));
  }
  double intercept = 0.0;
  const double slope = least_squares_slope(lx, ly, &intercept);
  const double sign = F.front() < 0 ? -1.0 : 1.0;
  double mean_ratio = 0.0, mean_ratio_rev = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) mean_ratio += F[i] / (vs[i] * vs[i]) / vs.size();
  for (std::size_t i = 0; i < Fr.size(); ++i) mean_ratio_rev += Fr[i] / (vs[i] * vs[i]) / vs.size();

  prepare_dir(base.out_dir);
  std::string s = base.sweep.paired ? "Ldot0,F_nonad,F_nonad_over_Ldot0_sq,F_nonad_reversed\n"
                                    : "Ldot0,F_nonad,F_nonad_over_Ldot0_sq\n";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    s += format_double(vs[i]) + "," + format_double(F[i]) + "," + format_double(F[i] / (vs[i] * vs[i]));
    if (base.sweep.paired) s += "," + format_double(Fr[i]);
    s += "\n";
  }
  const std::string file = base.prefix + "_sweep.csv";
  write_file(fs::path(base.out_dir) / file, s);

  json summary;
  summary["tool"] = "cavity";
  summary["version"] = "0.1.0";
  summary["command"] = "sweep";
  summary["config"] = config_echo(base);
  summary["csv"] = file;
  summary["engine"] = engine_name(engine);
  summary["slope"] = slope;
  summary["prefactor"] = sign * std::exp(intercept);
  summary["coefficient"] = mean_ratio * base.wall.L0;
  if (base.sweep.paired) {
    summary["coefficient_reversed"] = mean_ratio_rev * base.wall.L0;
    summary["paired_rel_dev"] = std::abs(mean_ratio - mean_ratio_rev) / std::abs(mean_ratio);
  }
  const json coeffs = base.wall_kind != "sqrt_law" ? coefficient_block(base) : json(nullptr);
  summary["coefficients"] = coeffs;
  if (!coeffs.is_null()) {
    const char* key = engine == Engine::perturbative ? "C" : "C_prime";
    if (engine == Engine::exact || engine == Engine::perturbative) {
      summary["reference_coefficient"] = key;
      if (coeffs.contains(key) && !coeffs[key].is_null())
        summary["coefficient_over_reference"] = mean_ratio * base.wall.L0 / coeffs[key].get<double>();
    }
  }
  write_file(fs::path(base.out_dir) / (base.prefix + "_summary.json"), summary.dump(2) + "\n");
  return exit_ok;
}

int cmd_roots(const std::vector<double>& hbarB, int nmax, const std::string& out_dir, const std::string& prefix) {
  if (hbarB.empty()) throw ConfigError("roots: no hbarB values given");
  if (nmax < 1) throw ConfigError("roots: nmax must be >= 1");
  for (double b : hbarB)
    if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("roots: hbarB values must be positive");
  std::string s = "hbarB,n,K,K_semiclassical,rel_dev,status\n";
  json entries = json::array();
  int failures = 0;
  for (double b : hbarB) {
    json entry{{"hbarB", b}};
    try {
      const auto K = find_roots(b, nmax);
      double worst = 0.0;
      for (int n = 1; n <= nmax; ++n) {
        const double sc = n * n * std::numbers::pi * std::numbers::pi / 2.0;
        const double dev = K[n - 1] / sc - 1.0;
        worst = std::max(worst, std::abs(dev));
        s += format_double(b) + "," + std::to_string(n) + "," + format_double(K[n - 1]) + "," + format_double(sc) + "," +
             format_double(dev) + ",ok\n";
      }
      entry["max_abs_rel_dev"] = worst;
      entry["status"] = "ok";
    } catch (const std::exception& e) {
      ++failures;
      s += format_double(b) + ",,,,,error: " + std::string(e.what()) + "\n";
      entry["status"] = "error";
      entry["error"] = e.what();
    }
    entries.push_back(entry);
  }
  prepare_dir(out_dir);
  write_file(fs::path(out_dir) / (prefix + "_roots.csv"), s);
  json summary{{"tool", "cavity"}, {"version", "0.1.0"}, {"command", "roots"}, {"nmax", nmax}, {"entries", entries},
               {"failures", failures}};
  write_file(fs::path(out_dir) / (prefix + "_summary.json"), summary.dump(2) + "\n");
  return exit_ok;
}

int cmd_jtable(int nmax, const std::string& out_dir, const std::string& prefix) {
  if (nmax < 1) throw ConfigError("jtable: nmax must be >= 1");
  const JTable J(nmax);
  std::string s = "n,l,J1,J2,J3\n";
  for (int n = 1; n <= nmax; ++n)
    for (int l = 1; l <= nmax; ++l)
      s += std::to_string(n) + "," + std::to_string(l) + "," + format_double(J.j1(n, l)) + "," +
           format_double(J.j2(n, l)) + "," + format_double(J.j3(n, l)) + "\n";
  prepare_dir(out_dir);
  write_file(fs::path(out_dir) / (prefix + "_jtable.csv"), s);
  json summary{{"tool", "cavity"}, {"version", "0.1.0"}, {"command", "jtable"}, {"nmax", nmax}};
  write_file(fs::path(out_dir) / (prefix + "_summary.json"), summary.dump(2) + "\n");
  return exit_ok;
}

}  // namespace cavity::scenario
