#include "flexcomm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <utility>

#include "flexcomm/lp_format.hpp"

namespace flexcomm {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Shortest decimal form that parses back to the same double.
std::string shortest_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string t = trim(value);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw DomainError("config key '" + key + "': not a number: '" + value + "'");
  return v;
}

long parse_long(const std::string& key, const std::string& value) {
  const std::string t = trim(value);
  char* end = nullptr;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size())
    throw DomainError("config key '" + key + "': not an integer: '" + value + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(value);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

void check_config(const ScenarioConfig& cfg) {
  if (cfg.n_buildings < 1) throw DomainError("n_buildings must be >= 1");
  if (cfg.evs_per_building < 0) throw DomainError("evs_per_building must be >= 0");
  if (cfg.population_size < cfg.evs_per_building)
    throw DomainError("population_size must be >= evs_per_building");
  if (cfg.park_mean_h <= 0 || cfg.charge_mean_h <= 0 || cfg.discharge_mean_h <= 0)
    throw DomainError("period means must be positive");
  if (cfg.park_sd_h < 0 || cfg.charge_sd_h < 0 || cfg.discharge_sd_h < 0)
    throw DomainError("period standard deviations must be non-negative");
  if (cfg.dt_hours <= 0) throw DomainError("dt_hours must be positive");
  const double steps = 24.0 / cfg.dt_hours;
  if (std::abs(steps - std::round(steps)) > 1e-9)
    throw DomainError("dt_hours must divide 24 h evenly");
  if (cfg.start_hour < 0 || cfg.start_hour >= 24)
    throw DomainError("start_hour must lie in [0, 24)");
  if (!(cfg.window_start_h < cfg.window_end_h))
    throw DomainError("availability window must be non-empty");
  if (cfg.window_start_h < cfg.start_hour - 1e-9 ||
      cfg.window_end_h > cfg.start_hour + 24.0 + 1e-9)
    throw DomainError("availability window must lie within the day");
  if (cfg.p_charge_max_kw <= 0 || cfg.p_discharge_max_kw <= 0)
    throw DomainError("power limits must be positive");
  if (cfg.efficiency <= 0 || cfg.efficiency > 1)
    throw DomainError("efficiency must lie in (0, 1]");
  if (cfg.grid_import_avg_eur_mwh <= 0)
    throw DomainError("grid_import_avg_eur_mwh must be positive");
  if (cfg.grid_export_comp_eur_mwh < 0 || cfg.grid_use_fee_eur_mwh < 0 ||
      cfg.flexibility_eur_h < 0 || cfg.discharging_eur_h < 0 ||
      cfg.charging_avg_eur_h < 0)
    throw DomainError("tariff magnitudes must be non-negative");
  if (!cfg.net_load_csv.empty() &&
      static_cast<int>(cfg.net_load_csv.size()) != cfg.n_buildings)
    throw DomainError("net_load_csv must list exactly one file per building");
}

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "n_buildings") cfg.n_buildings = static_cast<int>(parse_long(key, value));
    else if (key == "evs_per_building") cfg.evs_per_building = static_cast<int>(parse_long(key, value));
    else if (key == "population_size") cfg.population_size = static_cast<int>(parse_long(key, value));
    else if (key == "park_mean_h") cfg.park_mean_h = parse_double(key, value);
    else if (key == "park_sd_h") cfg.park_sd_h = parse_double(key, value);
    else if (key == "charge_mean_h") cfg.charge_mean_h = parse_double(key, value);
    else if (key == "charge_sd_h") cfg.charge_sd_h = parse_double(key, value);
    else if (key == "discharge_mean_h") cfg.discharge_mean_h = parse_double(key, value);
    else if (key == "discharge_sd_h") cfg.discharge_sd_h = parse_double(key, value);
    else if (key == "window_start_h") cfg.window_start_h = parse_double(key, value);
    else if (key == "window_end_h") cfg.window_end_h = parse_double(key, value);
    else if (key == "p_charge_max_kw") cfg.p_charge_max_kw = parse_double(key, value);
    else if (key == "p_discharge_max_kw") cfg.p_discharge_max_kw = parse_double(key, value);
    else if (key == "efficiency") cfg.efficiency = parse_double(key, value);
    else if (key == "rng_seed") cfg.rng_seed = static_cast<unsigned long>(parse_long(key, value));
    else if (key == "start_hour") cfg.start_hour = parse_double(key, value);
    else if (key == "dt_hours") cfg.dt_hours = parse_double(key, value);
    else if (key == "grid_import_avg_eur_mwh") cfg.grid_import_avg_eur_mwh = parse_double(key, value);
    else if (key == "grid_export_comp_eur_mwh") cfg.grid_export_comp_eur_mwh = parse_double(key, value);
    else if (key == "grid_use_fee_eur_mwh") cfg.grid_use_fee_eur_mwh = parse_double(key, value);
    else if (key == "parking_eur_h") cfg.parking_eur_h = parse_double(key, value);
    else if (key == "flexibility_eur_h") cfg.flexibility_eur_h = parse_double(key, value);
    else if (key == "discharging_eur_h") cfg.discharging_eur_h = parse_double(key, value);
    else if (key == "charging_avg_eur_h") cfg.charging_avg_eur_h = parse_double(key, value);
    else if (key == "wholesale_csv") cfg.wholesale_csv = value;
    else if (key == "net_load_csv") cfg.net_load_csv = split_list(value);
    else throw DomainError("config line " + std::to_string(lineno) +
                           ": unknown key '" + key + "'");
  }
  return cfg;
}

std::string config_to_text(const ScenarioConfig& cfg) {
  std::string out = "# community EV scheduling scenario\n";
  auto put_l = [&](const char* k, long v) {
    out += std::string(k) + " = " + std::to_string(v) + "\n";
  };
  auto put_d = [&](const char* k, double v) {
    out += std::string(k) + " = " + shortest_double(v) + "\n";
  };
  put_l("n_buildings", cfg.n_buildings);
  put_l("evs_per_building", cfg.evs_per_building);
  put_l("population_size", cfg.population_size);
  put_d("park_mean_h", cfg.park_mean_h);
  put_d("park_sd_h", cfg.park_sd_h);
  put_d("charge_mean_h", cfg.charge_mean_h);
  put_d("charge_sd_h", cfg.charge_sd_h);
  put_d("discharge_mean_h", cfg.discharge_mean_h);
  put_d("discharge_sd_h", cfg.discharge_sd_h);
  put_d("window_start_h", cfg.window_start_h);
  put_d("window_end_h", cfg.window_end_h);
  put_d("p_charge_max_kw", cfg.p_charge_max_kw);
  put_d("p_discharge_max_kw", cfg.p_discharge_max_kw);
  put_d("efficiency", cfg.efficiency);
  put_l("rng_seed", static_cast<long>(cfg.rng_seed));
  put_d("start_hour", cfg.start_hour);
  put_d("dt_hours", cfg.dt_hours);
  put_d("grid_import_avg_eur_mwh", cfg.grid_import_avg_eur_mwh);
  put_d("grid_export_comp_eur_mwh", cfg.grid_export_comp_eur_mwh);
  put_d("grid_use_fee_eur_mwh", cfg.grid_use_fee_eur_mwh);
  put_d("parking_eur_h", cfg.parking_eur_h);
  put_d("flexibility_eur_h", cfg.flexibility_eur_h);
  put_d("discharging_eur_h", cfg.discharging_eur_h);
  put_d("charging_avg_eur_h", cfg.charging_avg_eur_h);
  out += "wholesale_csv = " + cfg.wholesale_csv + "\n";
  std::string list;
  for (std::size_t i = 0; i < cfg.net_load_csv.size(); ++i) {
    if (i) list += ",";
    list += cfg.net_load_csv[i];
  }
  out += "net_load_csv = " + list + "\n";
  return out;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream ifs(path);
  if (!ifs) throw IoError("cannot open config file: " + path);
  std::stringstream ss;
  ss << ifs.rdbuf();
  return parse_config_text(ss.str());
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream ofs(path, std::ios::binary);
  if (!ofs) throw IoError("cannot open for writing: " + path);
  const std::string text = config_to_text(cfg);
  ofs.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!ofs.good()) throw IoError("write failed: " + path);
}

Eigen::VectorXd read_series_csv(const std::string& path,
                                const std::string& value_header, int steps) {
  std::ifstream ifs(path);
  if (!ifs) throw IoError("cannot open CSV file: " + path);
  std::string line;
  if (!std::getline(ifs, line))
    throw DomainError(path + ": empty file");
  if (trim(line) != "step," + value_header)
    throw DomainError(path + ": expected header 'step," + value_header + "'");
  Eigen::VectorXd v(steps);
  int row = 0;
  while (std::getline(ifs, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (row >= steps)
      throw DimensionMismatch(path + ": more than " + std::to_string(steps) + " rows");
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw DomainError(path + " row " + std::to_string(row) + ": missing comma");
    const long idx = parse_long("step", line.substr(0, comma));
    if (idx != row)
      throw DomainError(path + " row " + std::to_string(row) +
                        ": steps must be numbered consecutively from 0");
    v[row] = parse_double(value_header, line.substr(comma + 1));
    ++row;
  }
  if (row != steps)
    throw DimensionMismatch(path + ": expected " + std::to_string(steps) +
                            " rows, found " + std::to_string(row));
  return v;
}

void write_series_csv(const std::string& path, const std::string& value_header,
                      const Eigen::VectorXd& values) {
  std::ofstream ofs(path, std::ios::binary);
  if (!ofs) throw IoError("cannot open for writing: " + path);
  ofs << "step," << value_header << "\n";
  char buf[40];
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
    ofs << i << "," << buf << "\n";
  }
  if (!ofs.good()) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Synthetic inputs

std::vector<NetLoadPreset> default_presets() {
  return {
      {"b1", 40.0, 120.0, 0.0, 0.0, 0.0},
      {"b2", 30.0, 100.0, 30.0, 10.5, 15.5},
      {"b3", 50.0, 150.0, 15.0, 12.0, 14.5},
      {"b4", 20.0, 70.0, 80.0, 9.5, 16.0},
  };
}

BuildingSeries generate_net_load(const TimeGrid& grid, const NetLoadPreset& preset) {
  if (preset.base_kw < 0 || preset.peak_kw < preset.base_kw)
    throw DomainError("net-load preset needs 0 <= base_kw <= peak_kw");
  if (preset.surplus_depth_kw < 0)
    throw DomainError("net-load preset needs surplus_depth_kw >= 0");
  const bool surplus = preset.surplus_depth_kw > 0;
  if (surplus) {
    if (!(preset.surplus_start_h < preset.surplus_end_h))
      throw BadWindow("surplus window is empty");
    if (preset.surplus_start_h < grid.start_hour - 1e-9 ||
        preset.surplus_end_h > grid.start_hour + grid.span_hours() + 1e-9)
      throw BadWindow("surplus window outside the grid span");
  }
  Eigen::VectorXd v(grid.steps);
  for (int h = 0; h < grid.steps; ++h) {
    const double t = grid.mid_hour(h);
    // Two-peak demand curve: exactly `peak` at the 9 h / 19 h centres,
    // approaching `base` between and outside them.
    const double g1 = std::exp(-std::pow((t - 9.0) / 2.2, 2));
    const double g2 = std::exp(-std::pow((t - 19.0) / 2.8, 2));
    const double mix = g1 + g2 - g1 * g2;
    const double demand = preset.base_kw + (preset.peak_kw - preset.base_kw) * mix;
    double bump = 0.0;
    if (surplus && t > preset.surplus_start_h && t < preset.surplus_end_h) {
      const double u = (t - preset.surplus_start_h) /
                       (preset.surplus_end_h - preset.surplus_start_h);
      bump = 0.5 * (1.0 - std::cos(2.0 * kPi * u));
    }
    v[h] = (1.0 - bump) * demand - preset.surplus_depth_kw * bump;
  }
  return BuildingSeries{preset.id, std::move(v)};
}

std::vector<EVRequest> generate_ev_population(const ScenarioConfig& cfg,
                                              const TimeGrid& grid) {
  check_config(cfg);
  std::mt19937_64 rng(cfg.rng_seed);
  const double dt = grid.dt_hours;
  // Window step range [lo, hi] the parking interval must fit into.
  const int lo = static_cast<int>(
      std::ceil((cfg.window_start_h - grid.start_hour) / dt - 1e-9));
  const int hi = static_cast<int>(
      std::floor((cfg.window_end_h - grid.start_hour) / dt + 1e-9));

  auto draw = [&](double mean, double sd) {
    if (sd <= 0) return mean;
    return std::normal_distribution<double>(mean, sd)(rng);
  };

  std::vector<EVRequest> population;
  population.reserve(static_cast<std::size_t>(cfg.population_size));
  for (int i = 0; i < cfg.population_size; ++i) {
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      const double park = draw(cfg.park_mean_h, cfg.park_sd_h);
      const double charge = draw(cfg.charge_mean_h, cfg.charge_sd_h);
      const double discharge = draw(cfg.discharge_mean_h, cfg.discharge_sd_h);
      if (park <= 0 || charge <= 0 || discharge <= 0) continue;
      const double tp = snap_period(park, dt);
      const double tc = snap_period(charge, dt);
      const double td = snap_period(discharge, dt);
      if (tp < dt || tc < dt) continue;  // degenerate after snapping
      const int wsteps = static_cast<int>(std::lround(tp / dt));
      if (lo + wsteps > hi) continue;  // parking longer than the window
      if (tc + td * (1.0 + 1.0 / cfg.efficiency) > tp + 1e-9) continue;
      const int arrival =
          std::uniform_int_distribution<int>(lo, hi - wsteps)(rng);
      EVRequest req;
      req.id = "ev" + std::to_string(i);
      req.arrival_step = arrival;
      req.departure_step = arrival + wsteps;
      req.t_park_h = tp;
      req.t_charge_req_h = tc;
      req.t_discharge_allow_h = td;
      req.p_charge_max_kw = cfg.p_charge_max_kw;
      req.p_discharge_max_kw = cfg.p_discharge_max_kw;
      req.efficiency = cfg.efficiency;
      population.push_back(validate_request(req, grid));
      ok = true;
    }
    if (!ok)
      throw GenerationExhausted("profile " + std::to_string(i) +
                                ": no feasible draw in 100 attempts");
  }
  return population;
}

// ---------------------------------------------------------------------------
// Scenario assembly

Scenario build_scenario(const ScenarioConfig& cfg) {
  check_config(cfg);
  Scenario s;
  s.cfg = cfg;
  const int steps = static_cast<int>(std::lround(24.0 / cfg.dt_hours));
  s.grid = TimeGrid(cfg.start_hour, steps, cfg.dt_hours);

  const Eigen::VectorXd wholesale =
      cfg.wholesale_csv.empty()
          ? default_wholesale_shape(s.grid)
          : read_series_csv(cfg.wholesale_csv, "price_eur_mwh", steps);
  s.book.grid_import_eur_kwh = build_grid_import(wholesale, cfg.grid_import_avg_eur_mwh);
  s.book.grid_export_comp_eur_kwh = cfg.grid_export_comp_eur_mwh / 1000.0;
  s.book.grid_use_fee_eur_kwh = cfg.grid_use_fee_eur_mwh / 1000.0;
  s.book.parking_eur_h = cfg.parking_eur_h;
  s.book.flexibility_eur_h = cfg.flexibility_eur_h;
  s.book.discharging_eur_h = cfg.discharging_eur_h;
  s.book.charging_eur_h =
      build_charging_tariff(s.book.grid_import_eur_kwh, cfg.charging_avg_eur_h);
  check_book(s.grid, s.book);
  s.community = derive_community_tariffs(s.book);

  if (!cfg.net_load_csv.empty()) {
    for (int b = 0; b < cfg.n_buildings; ++b) {
      BuildingSeries bs;
      bs.id = "b" + std::to_string(b + 1);
      bs.net_load_kw = read_series_csv(cfg.net_load_csv[b], "net_load_kw", steps);
      s.buildings.push_back(std::move(bs));
    }
  } else {
    const std::vector<NetLoadPreset> presets = default_presets();
    for (int b = 0; b < cfg.n_buildings; ++b) {
      NetLoadPreset p = presets[static_cast<std::size_t>(b) % presets.size()];
      p.id = "b" + std::to_string(b + 1);
      s.buildings.push_back(generate_net_load(s.grid, p));
    }
  }

  const std::vector<EVRequest> population = generate_ev_population(cfg, s.grid);
  // Assignment uses its own stream so population draws stay comparable
  // across different building counts.
  std::mt19937_64 rng(cfg.rng_seed ^ 0x5DEECE66DULL);
  for (int b = 0; b < cfg.n_buildings; ++b) {
    std::vector<int> pool(population.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i);
    std::vector<int> chosen;
    for (int k = 0; k < cfg.evs_per_building; ++k) {
      const int j = std::uniform_int_distribution<int>(
          k, static_cast<int>(pool.size()) - 1)(rng);
      std::swap(pool[k], pool[j]);
      chosen.push_back(pool[k]);
    }
    std::sort(chosen.begin(), chosen.end());
    std::vector<EVRequest> evs;
    for (int idx : chosen) {
      EVRequest req = population[static_cast<std::size_t>(idx)];
      req.id = "b" + std::to_string(b + 1) + "_" + req.id;
      evs.push_back(std::move(req));
    }
    s.evs.push_back(std::move(evs));
  }
  return s;
}

RunMode mode_from_string(const std::string& s) {
  if (s == "baseline") return RunMode::baseline;
  if (s == "individual") return RunMode::individual;
  if (s == "community") return RunMode::community;
  throw DomainError("unknown mode '" + s + "' (baseline|individual|community)");
}

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::baseline: return "baseline";
    case RunMode::individual: return "individual";
    case RunMode::community: return "community";
  }
  return "?";
}

namespace {

std::string tag_of_row(const BuiltModel& built, int row) {
  if (row < 0 || row >= static_cast<int>(built.mip.rows.size())) return "unknown";
  return built.mip.rows[static_cast<std::size_t>(row)].tag + "_" + std::to_string(row);
}

// Severity order for merging per-building solver statuses.
int status_rank(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return 0;
    case SolveStatus::gap_reached: return 1;
    case SolveStatus::limit: return 2;
    default: return 3;
  }
}

void fill_totals(ScenarioRun& run) {
  run.total_electricity_eur = 0.0;
  run.total_ev_revenue_eur = 0.0;
  for (const BuildingSolution& bs : run.solution.buildings) {
    run.total_electricity_eur += bs.costs.electricity_cost_eur;
    run.total_ev_revenue_eur += bs.costs.ev_revenue_eur;
  }
  run.total_objective_eur = run.solution.objective_eur;
  run.nodes = run.solution.nodes_explored;
  run.gap = relative_gap(run.solution.objective_eur, run.solution.best_bound_eur);
}

}  // namespace

ScenarioRun run_mode(const Scenario& scn, RunMode mode, const SolveOptions& opts,
                     const std::string& export_lp_path) {
  ScenarioRun run;
  run.mode = mode;

  if (mode == RunMode::baseline) {
    ScheduleSolution sol;
    sol.status = SolutionStatus::optimal;
    for (const BuildingSeries& b : scn.buildings) {
      BuildingSolution bs;
      bs.building_id = b.id;
      bs.comm_export_kw = Eigen::VectorXd::Zero(scn.grid.steps);
      bs.comm_import_kw = Eigen::VectorXd::Zero(scn.grid.steps);
      bs.grid_residual_kw = b.net_load_kw;
      bs.costs = assemble_costs(scn.grid, scn.book, std::nullopt, b, {}, bs);
      sol.objective_eur += bs.costs.objective_eur;
      sol.buildings.push_back(std::move(bs));
    }
    sol.best_bound_eur = sol.objective_eur;
    run.solution = std::move(sol);
    fill_totals(run);
    return run;
  }

  if (mode == RunMode::individual) {
    ScheduleSolution merged;
    merged.status = SolutionStatus::optimal;
    run.solver_status = SolveStatus::optimal;
    for (std::size_t b = 0; b < scn.buildings.size(); ++b) {
      ScheduleModelBuilder builder(scn.grid, scn.book);
      builder.add_building(scn.buildings[b], scn.evs[b]);
      BuiltModel built = builder.build();
      if (!export_lp_path.empty())
        export_lp_file(built.mip, export_lp_path + "." + scn.buildings[b].id);
      const SolveResult res = branch_and_bound(built.mip, opts);
      if (res.status == SolveStatus::unbounded)
        throw DomainError("individual model unbounded for building " +
                          scn.buildings[b].id + " (check tariffs)");
      if (res.status == SolveStatus::infeasible || res.assignment.size() == 0) {
        run.solver_status = res.status;
        run.infeasible_tag = tag_of_row(built, res.infeasible_row);
        run.solution = ScheduleSolution{};
        return run;
      }
      const ScheduleSolution part = extract_solution(built, res);
      merged.buildings.push_back(part.buildings[0]);
      merged.objective_eur += part.objective_eur;
      merged.best_bound_eur += res.best_bound;
      merged.nodes_explored += res.nodes;
      if (status_rank(res.status) > status_rank(run.solver_status))
        run.solver_status = res.status;
      if (part.status != SolutionStatus::optimal)
        merged.status = SolutionStatus::feasible_with_gap;
    }
    run.solution = std::move(merged);
    fill_totals(run);
    return run;
  }

  // Community: one joint model.
  ScheduleModelBuilder builder(scn.grid, scn.book);
  builder.enable_community(scn.community);
  for (std::size_t b = 0; b < scn.buildings.size(); ++b)
    builder.add_building(scn.buildings[b], scn.evs[b]);
  BuiltModel built = builder.build();
  if (!export_lp_path.empty()) export_lp_file(built.mip, export_lp_path);
  const SolveResult res = branch_and_bound(built.mip, opts);
  if (res.status == SolveStatus::unbounded)
    throw DomainError("community model unbounded (check tariffs)");
  run.solver_status = res.status;
  if (res.status == SolveStatus::infeasible || res.assignment.size() == 0) {
    run.infeasible_tag = tag_of_row(built, res.infeasible_row);
    run.solution = ScheduleSolution{};
    return run;
  }
  run.solution = extract_solution(built, res);
  fill_totals(run);
  return run;
}

}  // namespace flexcomm
