#include <cmath>
#include <future>
#include <limits>
#include <numbers>

#include "cavity/box.hpp"
#include "cavity/errors.hpp"
#include "cavity/hardwall.hpp"
#include "cavity/pde_oracle.hpp"
#include "cavity/perturbative.hpp"
#include "cavity/softwall.hpp"
#include "cavity/sqrtlaw.hpp"
#include "scenario.hpp"

namespace cavity::scenario {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

bool soft_levels(const ScenarioConfig& cfg, Engine e) {
  return e == Engine::softwall || (e == Engine::oracle && cfg.oracle.geometry == "trap");
}

struct Weighted {
  int level;
  double weight;
};

std::vector<Weighted> filling(const ScenarioConfig& cfg, Engine e, int cap) {
  if (cfg.level) return {{*cfg.level, 1.0}};
  const bool soft = soft_levels(cfg, e);
  const int first = soft ? 0 : 1;
  const auto& occ = cfg.occupation;
  std::vector<Weighted> out;
  const double L0 = cfg.wall.L0;
  for (int rank = 1; rank <= cap; ++rank) {
    const double E = soft ? (rank - 0.5) / (L0 * L0) : box_energy(rank, L0);
    const double f = occ.weight(rank, E);
    if (f > 1e-14) out.push_back({first + rank - 1, f});
    if (f <= 1e-14 && (occ.mode == OccupationModel::Mode::zero_temperature || E > occ.mu)) return out;
  }
  throw TruncationError(std::string("occupation still populated at level cap ") + std::to_string(cap) + " for engine " +
                        engine_name(e));
}

TimeWindow window_for(const ScenarioConfig& cfg, Engine e) {
  int top = 1;
  const auto levels = filling(cfg, e, 1 << 16);
  for (const auto& w : levels) top = std::max(top, w.level + (soft_levels(cfg, e) ? 1 : 0));
  if (soft_levels(cfg, e)) {
    const double v = cfg.wall.Ldot0, L0 = cfg.wall.L0;
    return {10.0 * cfg.wall.hbar * L0 * L0, v == 0.0 ? std::numeric_limits<double>::infinity() : 0.1 * L0 / std::abs(v)};
  }
  return time_window(cfg.wall, OccupationModel::zero_temperature(top));
}

WallSchedule as_sqrt_law(const WallSchedule& s) {
  if (s.kind == WallSchedule::Kind::sqrt_law) return s;
  return WallSchedule::sqrt_law_from_initial(s.L0, s.Ldot0, 0.0, s.hbar);
}

// sums single-level samples with occupation weights
template <class Sampler>
EngineRun single_level_engine(const ScenarioConfig& cfg, Engine e, std::vector<std::string> labels, Sampler make) {
  EngineRun run{e, std::move(labels), {}, {}, 0.0};
  const auto levels = filling(cfg, e, nmax_for(cfg, e));
  const auto win = window_for(cfg, e);
  std::vector<Row> rows(cfg.times.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i] = Row{cfg.times[i], 0, 0, 0, 0, 0, 0, 0, 0, 0, win.contains(cfg.times[i]),
                  std::vector<double>(run.raw_labels.size(), 0.0)};
  }
  try {
    for (const auto& w : levels) {
      auto sample = make(w.level);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const TrajectorySample s = sample(cfg.times[i]);
        Row& r = rows[i];
        r.L = s.L;
        r.Ldot = s.Ldot;
        r.tau = s.tau;
        r.energy += w.weight * s.energy;
        r.f_ad += w.weight * s.force.adiabatic;
        r.f_nonad += w.weight * s.force.non_adiabatic;
        r.f_total += w.weight * s.force.total;
        r.f_fd += w.weight * s.fd_force;
        r.norm2 += w.weight * s.norm2;
        for (std::size_t k = 0; k < run.raw_labels.size(); ++k)
          r.raw[k] += w.weight * s.force.raw_value(run.raw_labels[k]);
      }
    }
  } catch (const ConsistencyError& err) {
    run.consistency_error = err.what();
    return run;
  }
  for (auto& r : rows) {
    if (std::isnan(r.f_fd)) continue;
    if (r.f_total != 0.0) run.max_route_dev = std::max(run.max_route_dev, std::abs(r.f_fd - r.f_total) / std::abs(r.f_total));
  }
  run.rows = std::move(rows);
  return run;
}

EngineRun run_exact(const ScenarioConfig& cfg) {
  const int nmax = nmax_for(cfg, Engine::exact);
  return single_level_engine(cfg, Engine::exact, {"I0", "ImI1", "I2"}, [&](int level) {
    auto eng = std::make_shared<HardWallEngine>(cfg.wall, level, nmax);
    return [eng, &cfg](double t) { return eng->sample(t, cfg.mode); };
  });
}

EngineRun run_sqrtlaw(const ScenarioConfig& cfg) {
  const int nmax = nmax_for(cfg, Engine::sqrtlaw);
  const auto s = as_sqrt_law(cfg.wall);
  return single_level_engine(cfg, Engine::sqrtlaw, {"Ibar0", "ImIbar1", "Ibar2"}, [&, s](int level) {
    auto eng = std::make_shared<SqrtLawEngine>(s, level, nmax);
    return [eng, &cfg](double t) { return eng->sample(t, cfg.mode); };
  });
}

EngineRun run_softwall(const ScenarioConfig& cfg) {
  const int nmax = nmax_for(cfg, Engine::softwall);
  return single_level_engine(cfg, Engine::softwall, {"K0", "ImK1", "K2"}, [&](int level) {
    auto eng = std::make_shared<SoftWallEngine>(cfg.wall, level, nmax);
    return [eng, &cfg](double t) { return eng->sample(t, cfg.mode); };
  });
}

EngineRun run_oracle(const ScenarioConfig& cfg) {
  const bool trap = cfg.oracle.geometry == "trap";
  std::vector<std::string> labels = trap ? std::vector<std::string>{"K0", "ImK1", "K2", "fidelity"}
                                         : std::vector<std::string>{"I0", "ImI1", "I2", "fidelity"};
  return single_level_engine(cfg, Engine::oracle, labels, [&, trap](int level) {
    OracleConfig oc;
    oc.geometry = trap ? OracleGeometry::trap : OracleGeometry::box;
    oc.schedule = cfg.wall;
    oc.level = level;
    oc.grid_points = cfg.oracle.grid_points;
    oc.dt = cfg.oracle.dt;
    oc.y_max = cfg.oracle.y_max;
    auto pde = std::make_shared<PdeOracle>(oc);
    // spectral reference for the fidelity column (not for the sqrt-law wall)
    std::shared_ptr<HardWallEngine> hard;
    std::shared_ptr<SoftWallEngine> soft;
    if (cfg.wall.kind != WallSchedule::Kind::sqrt_law) {
      if (trap)
        soft = std::make_shared<SoftWallEngine>(cfg.wall, level, 64);
      else
        hard = std::make_shared<HardWallEngine>(cfg.wall, level, 64);
    }
    return [pde, hard, soft, &cfg, oc](double t) {
      pde->advance_to(t);
      const auto& psi = pde->state();
      const auto obs = observables(psi, cfg.wall, oc.geometry);
      const auto g = eval_length(cfg.wall, t);
      TrajectorySample s;
      s.t = t;
      s.L = g.L;
      s.Ldot = g.Ldot;
      s.tau = scaled_time(cfg.wall, t);
      s.energy = obs.energy;
      s.force = obs.force;
      s.fd_force = nan;
      s.norm2 = psi.norm2();
      double fid = nan;
      if (hard) fid = fidelity(psi, reconstruct_on_grid(hard->state_at(t), psi, g.L, g.Ldot, cfg.wall.hbar));
      if (soft)
        fid = fidelity(psi, reconstruct_on_grid(softwall_propagate(soft->initial_state(), s.tau, cfg.wall.hbar), psi, g.L,
                                                g.Ldot, cfg.wall.hbar));
      s.force.raw.push_back({"fidelity", fid});
      return s;
    };
  });
}

EngineRun run_perturbative(const ScenarioConfig& cfg) {
  EngineRun run{Engine::perturbative, {"S1", "S2", "S3", "S2_dephased", "S3_dephased"}, {}, {}, 0.0};
  const int nmax = nmax_for(cfg, Engine::perturbative);
  const bool avg = cfg.mode == EvalMode::time_averaged;
  // time-averaged populations f + eps^2 g2 (cos -> 1) at the initial box
  double avg_energy = 0.0;
  if (avg) {
    const PerturbativeModel M(cfg.wall, cfg.occupation, nmax);
    const double e2 = M.epsilon() * M.epsilon();
    for (int n = 1; n <= nmax; ++n) avg_energy += (M.weight(n) + e2 * M.g2_dephased(n)) * M.energy0(n);
  }
  for (double t : cfg.times) {
    const auto P = perturbative_force(cfg.occupation, cfg.wall, t, nmax, avg);
    const auto F = P.breakdown(cfg.mode);
    const auto g = eval_length(cfg.wall, t);
    Row r{t,
          avg ? cfg.wall.L0 : g.L,
          avg ? cfg.wall.Ldot0 : g.Ldot,
          avg ? 0.0 : scaled_time(cfg.wall, t),
          avg ? avg_energy : P.energy,
          F.adiabatic,
          F.non_adiabatic,
          F.total,
          nan,
          0.0,
          P.in_window,
          {}};
    for (int n = 1; n <= nmax; ++n) r.norm2 += cfg.occupation.weight(n, box_energy(n, cfg.wall.L0));
    for (const auto& label : run.raw_labels) r.raw.push_back(F.raw_value(label));
    run.rows.push_back(std::move(r));
  }
  return run;
}

}  // namespace

RunResult run_engines(const ScenarioConfig& cfg) {
  RunResult out;
  const auto engines = selected_engines(cfg, &out.notes);
  std::vector<std::future<EngineRun>> jobs;
  for (Engine e : engines) {
    jobs.push_back(std::async(std::launch::async, [e, &cfg]() {
      try {
        switch (e) {
          case Engine::exact: return run_exact(cfg);
          case Engine::perturbative: return run_perturbative(cfg);
          case Engine::sqrtlaw: return run_sqrtlaw(cfg);
          case Engine::softwall: return run_softwall(cfg);
          case Engine::oracle: return run_oracle(cfg);
        }
      } catch (const ConsistencyError&) {
        throw;
      } catch (const std::exception& err) {
        throw std::runtime_error(std::string("engine ") + engine_name(e) + ": " + err.what());
      }
      throw std::logic_error("unreachable");
    }));
  }
  for (auto& j : jobs) out.runs.push_back(j.get());
  return out;
}

}  // namespace cavity::scenario
