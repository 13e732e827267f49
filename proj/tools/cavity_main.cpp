#include <iostream>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "cavity/errors.hpp"
#include "scenario.hpp"

using namespace cavity::scenario;

namespace {

struct Overrides {
  std::string engine, out_dir, mode;
  int nmax = 0;
};

ScenarioConfig configured(const std::string& path, const Overrides& o) {
  ScenarioConfig cfg = load_config(path);
  if (!o.engine.empty()) cfg.engine = o.engine;
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (o.nmax > 0) cfg.nmax = o.nmax;
  if (o.mode == "instantaneous") cfg.mode = cavity::EvalMode::instantaneous;
  else if (o.mode == "time_averaged") cfg.mode = cavity::EvalMode::time_averaged;
  else if (!o.mode.empty()) throw ConfigError("--mode must be instantaneous or time_averaged");
  return cfg;
}

void add_common(CLI::App* sub, std::string& config, Overrides& o, bool need_config) {
  auto* c = sub->add_option("--config,-c", config, "scenario YAML file");
  if (need_config) c->required();
  sub->add_option("--engine", o.engine, "exact|perturbative|sqrtlaw|softwall|oracle|all");
  sub->add_option("--out-dir", o.out_dir, "output directory");
  sub->add_option("--nmax", o.nmax, "basis truncation");
  sub->add_option("--mode", o.mode, "instantaneous|time_averaged");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moving-wall cavity force calculator"};
  app.require_subcommand(0, 1);
  bool print_schema = false;
  app.add_flag("--print-schema", print_schema, "print the annotated config schema and exit");
  // nothing here draws random numbers; accepted so scripted calls can state it
  app.add_flag("--seedless", "deterministic operation (always on)");

  std::string config;
  Overrides o;
  auto* run = app.add_subcommand("run", "evaluate one scenario");
  add_common(run, config, o, true);
  auto* compare = app.add_subcommand("compare", "run all applicable engines and compare them");
  add_common(compare, config, o, true);
  auto* sweep = app.add_subcommand("sweep", "velocity sweep with a log-log fit");
  add_common(sweep, config, o, true);

  auto* roots = app.add_subcommand("roots", "sqrt-law eigenvalue roots");
  std::vector<double> hbarB;
  std::string roots_cfg, roots_dir = "out", roots_prefix = "roots";
  int roots_nmax = 5;
  bool hbarB_given = false;
  roots->add_option("--config,-c", roots_cfg, "scenario YAML file with a roots block");
  auto* hb = roots->add_option("--hbarB", hbarB, "field values")->expected(0, -1);
  roots->add_option("--nmax", roots_nmax, "roots per field value");
  roots->add_option("--out-dir", roots_dir, "output directory");
  roots->add_option("--prefix", roots_prefix, "file prefix");

  auto* jtable = app.add_subcommand("jtable", "tabulate the box matrix elements");
  int j_nmax = 12;
  std::string j_dir = "out", j_prefix = "jtable";
  jtable->add_option("--nmax", j_nmax, "largest index");
  jtable->add_option("--out-dir", j_dir, "output directory");
  jtable->add_option("--prefix", j_prefix, "file prefix");

  auto* selftest = app.add_subcommand("selftest", "run the acceptance checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_usage;
  }

  try {
    if (print_schema) {
      std::cout << schema_text();
      return exit_ok;
    }
    if (*run || *compare) {
      auto* sub = *run ? run : compare;
      if (*compare && o.engine.empty()) o.engine = "all";
      ScenarioConfig cfg = configured(config, o);
      validate(cfg, sub->get_name());
      return cmd_run(cfg, sub->get_name());
    }
    if (*sweep) {
      ScenarioConfig cfg = configured(config, o);
      validate(cfg, "sweep");
      return cmd_sweep(cfg);
    }
    if (*roots) {
      hbarB_given = hb->count() > 0;
      if (!roots_cfg.empty()) {
        const ScenarioConfig cfg = load_config(roots_cfg);
        if (!hbarB_given) hbarB = cfg.roots_hbarB;
        if (roots->count("--nmax") == 0) roots_nmax = cfg.roots_nmax;
        if (roots->count("--out-dir") == 0) roots_dir = cfg.out_dir;
      }
      return cmd_roots(hbarB, roots_nmax, roots_dir, roots_prefix);
    }
    if (*jtable) return cmd_jtable(j_nmax, j_dir, j_prefix);
    if (*selftest) {
      const auto results = cavity::acceptance::run_all(std::cout);
      return cavity::acceptance::exit_code(results);
    }
    std::cout << app.help();
    return exit_usage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_usage;
  } catch (const DegenerateFitError& e) {
    std::cerr << "degenerate fit: " << e.what() << "\n";
    return exit_degenerate;
  } catch (const cavity::ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    return exit_consistency;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_engine;
  }
}
