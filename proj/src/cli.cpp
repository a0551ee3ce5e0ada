#include "flexcomm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flexcomm/report.hpp"
#include "flexcomm/scenario.hpp"

namespace flexcomm {

namespace {

namespace fs = std::filesystem;

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::gap_reached: return "gap_reached";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::limit: return "limit";
  }
  return "unknown";
}

void write_manifest(const std::string& out_dir, std::vector<std::string> paths) {
  std::vector<std::string> names;
  names.reserve(paths.size());
  for (const std::string& p : paths) names.push_back(fs::path(p).filename().string());
  std::sort(names.begin(), names.end());
  std::ofstream out(fs::path(out_dir) / "manifest.txt", std::ios::binary);
  if (!out) throw IoError("cannot write manifest in '" + out_dir + "'");
  for (const std::string& n : names) out << n << "\n";
  out.flush();
  if (!out.good()) throw IoError("failed writing manifest in '" + out_dir + "'");
}

int do_run(const ScenarioConfig& cfg, const std::string& mode_str,
           const std::string& out_dir, const std::string& export_lp,
           double time_limit) {
  const Scenario scn = build_scenario(cfg);
  SolveOptions opts;
  opts.time_limit_seconds = time_limit;

  std::vector<RunMode> modes;
  if (mode_str == "all")
    modes = {RunMode::baseline, RunMode::individual, RunMode::community};
  else
    modes = {mode_from_string(mode_str)};

  fs::create_directories(out_dir);
  std::vector<std::string> files;
  std::map<RunMode, ScenarioRun> runs;
  for (RunMode m : modes) {
    const std::string lp = (m == RunMode::baseline) ? std::string() : export_lp;
    ScenarioRun run = run_mode(scn, m, opts, lp);
    if (run.solver_status == SolveStatus::infeasible) {
      std::cerr << to_string(m) << " model is infeasible";
      if (!run.infeasible_tag.empty())
        std::cerr << " (first violated row: " << run.infeasible_tag << ")";
      std::cerr << "\n";
      return 1;
    }
    char line[200];
    std::snprintf(line, sizeof(line),
                  "%-10s  objective %12.2f EUR  electricity %12.2f  ev %9.2f"
                  "  status %s  nodes %ld\n",
                  to_string(m).c_str(), run.total_objective_eur,
                  run.total_electricity_eur, run.total_ev_revenue_eur,
                  status_name(run.solver_status), run.nodes);
    std::cout << line;
    std::vector<std::string> series = emit_series(scn, run, out_dir);
    files.insert(files.end(), series.begin(), series.end());
    runs.emplace(m, std::move(run));
  }

  if (runs.size() == 3) {
    ReportBundle bundle =
        emit_cost_table(runs.at(RunMode::baseline), runs.at(RunMode::individual),
                        runs.at(RunMode::community), out_dir);
    files.insert(files.end(), bundle.files.begin(), bundle.files.end());
    std::cout << "\n" << render_cost_table_text(bundle);
  }
  write_manifest(out_dir, files);
  std::cout << "\nwrote " << files.size() + 1 << " files to " << out_dir << "\n";
  return 0;
}

int do_verify() {
  const std::vector<OracleCheck> checks = run_oracle_suite();
  std::size_t passed = 0;
  for (const OracleCheck& c : checks) {
    char line[200];
    std::snprintf(line, sizeof(line), "%-26s oracle %14.6f  milp %14.6f  %s\n",
                  c.id.c_str(), c.oracle, c.milp, c.pass ? "agree" : "DISAGREE");
    std::cout << line;
    if (c.pass) ++passed;
  }
  std::cout << passed << "/" << checks.size() << " micro scenarios agree\n";
  return passed == checks.size() ? 0 : 1;
}

int do_gen(const ScenarioConfig& cfg, const std::string& out_dir) {
  check_config(cfg);
  const int steps = static_cast<int>(std::lround(24.0 / cfg.dt_hours));
  const TimeGrid grid(cfg.start_hour, steps, cfg.dt_hours);
  fs::create_directories(out_dir);

  // The synthetic wholesale day, scaled to read naturally in EUR/MWh. The
  // import tariff builder normalises to the configured average, so any
  // positive scaling reproduces the same tariffs.
  const Eigen::VectorXd wholesale =
      default_wholesale_shape(grid) * cfg.grid_import_avg_eur_mwh;
  const std::string wholesale_path = (fs::path(out_dir) / "wholesale.csv").string();
  write_series_csv(wholesale_path, "price_eur_mwh", wholesale);

  const Scenario scn = build_scenario(cfg);
  ScenarioConfig out_cfg = cfg;
  out_cfg.wholesale_csv = wholesale_path;
  out_cfg.net_load_csv.clear();
  for (std::size_t i = 0; i < scn.buildings.size(); ++i) {
    const std::string path =
        (fs::path(out_dir) / ("net_load_b" + std::to_string(i + 1) + ".csv")).string();
    write_series_csv(path, "net_load_kw", scn.buildings[i].net_load_kw);
    out_cfg.net_load_csv.push_back(path);
  }
  const std::string cfg_path = (fs::path(out_dir) / "config.cfg").string();
  save_config(out_cfg, cfg_path);
  std::cout << "wrote " << cfg_path << " and " << scn.buildings.size() + 1
            << " input series\n";
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"EV flexibility and community energy scheduling"};
  app.require_subcommand(1);

  std::string config_path;
  std::string mode_str = "all";
  std::string out_dir = "results";
  std::string export_lp;
  unsigned long seed = 0;
  double dt = 0.0;
  double time_limit = 0.0;
  CLI::App* run = app.add_subcommand("run", "Solve a scenario and write reports");
  run->add_option("--config", config_path, "scenario config file (key=value)");
  run->add_option("--mode", mode_str, "baseline|individual|community|all");
  run->add_option("--seed", seed, "override the config's rng_seed");
  run->add_option("--out", out_dir, "output directory (default results)");
  run->add_option("--export-lp", export_lp, "dump the model(s) in LP format");
  run->add_option("--dt", dt, "override the step length in hours");
  run->add_option("--time-limit", time_limit, "solver time limit in seconds");

  CLI::App* verify = app.add_subcommand("verify", "Run the oracle agreement suite");

  std::string gen_out = "scenario";
  unsigned long gen_seed = 0;
  double gen_dt = 0.0;
  CLI::App* gen =
      app.add_subcommand("gen", "Write a default config and synthetic inputs");
  gen->add_option("--out", gen_out, "output directory (default scenario)");
  gen->add_option("--seed", gen_seed, "rng_seed to store in the config");
  gen->add_option("--dt", gen_dt, "step length in hours");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      ScenarioConfig cfg;
      if (!config_path.empty()) cfg = load_config(config_path);
      if (run->count("--seed") > 0) cfg.rng_seed = seed;
      if (run->count("--dt") > 0) cfg.dt_hours = dt;
      return do_run(cfg, mode_str, out_dir, export_lp, time_limit);
    }
    if (verify->parsed()) return do_verify();
    if (gen->parsed()) {
      ScenarioConfig cfg;
      if (gen->count("--seed") > 0) cfg.rng_seed = gen_seed;
      if (gen->count("--dt") > 0) cfg.dt_hours = gen_dt;
      return do_gen(cfg, gen_out);
    }
  } catch (const InfeasibleRequest& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("flexcomm");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace flexcomm
