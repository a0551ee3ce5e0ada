#pragma once

// Scenario generation and execution: synthetic net loads, seeded EV
// populations, tariff assembly, the three management modes, and the
// brute-force micro-scenario oracle used for verification.

#include <optional>
#include <string>
#include <vector>

#include "flexcomm/builder.hpp"
#include "flexcomm/core.hpp"
#include "flexcomm/costs.hpp"
#include "flexcomm/mip.hpp"
#include "flexcomm/tariffs.hpp"

namespace flexcomm {

// A randomly drawn EV profile kept failing the feasibility invariant after
// the maximum number of redraws.
struct GenerationExhausted : Error {
  using Error::Error;
};

// A surplus window lies outside the day or is empty.
struct BadWindow : Error {
  using Error::Error;
};

// A micro scenario exceeds the oracle's enumeration bounds.
struct TooLarge : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Configuration

// All knobs of a scenario run. Defaults reproduce the reference case: four
// buildings, six EVs each drawn from a 30-profile population, parking
// 8 h +- 1, charging 2 h +- 0.5, discharging 0.75 h +- 0.25, availability
// window 8-20 h, 10 kW chargers at 93% efficiency; grid import averaging
// 122.8 EUR/MWh shaped like the wholesale day, flat export compensation
// 35.8 EUR/MWh, 50 EUR/MWh community grid-use fee, parking 0.5 EUR/h,
// flexibility reward 0.5 EUR/h, discharging reward 3 EUR/h, charging fee
// averaging 2 EUR/h shaped like the import tariff.
struct ScenarioConfig {
  int n_buildings = 4;
  int evs_per_building = 6;
  int population_size = 30;
  double park_mean_h = 8.0;
  double park_sd_h = 1.0;
  double charge_mean_h = 2.0;
  double charge_sd_h = 0.5;
  double discharge_mean_h = 0.75;
  double discharge_sd_h = 0.25;
  double window_start_h = 8.0;
  double window_end_h = 20.0;
  double p_charge_max_kw = 10.0;
  double p_discharge_max_kw = 10.0;
  double efficiency = 0.93;
  unsigned long rng_seed = 1;
  double start_hour = 0.0;
  double dt_hours = 0.25;
  double grid_import_avg_eur_mwh = 122.8;
  double grid_export_comp_eur_mwh = 35.8;
  double grid_use_fee_eur_mwh = 50.0;
  double parking_eur_h = 0.5;
  double flexibility_eur_h = 0.5;
  double discharging_eur_h = 3.0;
  double charging_avg_eur_h = 2.0;
  std::string wholesale_csv;               // step,price_eur_mwh; empty = synthetic
  std::vector<std::string> net_load_csv;   // one per building; empty = presets
};

// Throws DomainError on invalid values (non-positive means/sds, window
// outside the day, dt not dividing 24 h, ...).
void check_config(const ScenarioConfig& cfg);

// Flat key=value text round-trip ('#' starts a comment; keys are the field
// names; net_load_csv takes a comma-separated list). Unknown keys throw
// DomainError; missing keys keep their defaults.
ScenarioConfig parse_config_text(const std::string& text);
std::string config_to_text(const ScenarioConfig& cfg);
ScenarioConfig load_config(const std::string& path);      // IoError, DomainError
void save_config(const ScenarioConfig& cfg, const std::string& path);  // IoError

// Reads a two-column CSV `step,<value_header>` with rows numbered from 0.
// Throws IoError, DomainError (malformed), DimensionMismatch (row count).
Eigen::VectorXd read_series_csv(const std::string& path,
                                const std::string& value_header, int steps);
// Writes the matching CSV (full %.17g precision).
void write_series_csv(const std::string& path, const std::string& value_header,
                      const Eigen::VectorXd& values);

// ---------------------------------------------------------------------------
// Synthetic inputs

// Parameters of one synthetic daily net-load curve: two-peak demand between
// `base_kw` and `peak_kw` plus a raised-cosine generation trough of
// `surplus_depth_kw` over [surplus_start_h, surplus_end_h] (ignored when the
// depth is zero).
struct NetLoadPreset {
  std::string id;
  double base_kw = 0.0;
  double peak_kw = 0.0;
  double surplus_depth_kw = 0.0;
  double surplus_start_h = 0.0;
  double surplus_end_h = 0.0;
};

// The four reference curves b1..b4: one pure consumer, two mixed, one
// dominant midday exporter.
std::vector<NetLoadPreset> default_presets();

// Samples the preset curve at step midpoints. Throws BadWindow if the
// surplus window is empty or outside the grid span while depth > 0, and
// DomainError on negative depth or peak < base.
BuildingSeries generate_net_load(const TimeGrid& grid, const NetLoadPreset& preset);

// Draws the seeded EV profile population: normal periods (redrawn until
// positive, grid-aligned and feasible; at most 100 attempts each, then
// GenerationExhausted) and uniform arrival steps such that the window fits
// inside [window_start_h, window_end_h].
std::vector<EVRequest> generate_ev_population(const ScenarioConfig& cfg,
                                              const TimeGrid& grid);

// ---------------------------------------------------------------------------
// Scenario assembly and runs

// Everything a run needs, fully deterministic in the config.
struct Scenario {
  ScenarioConfig cfg;
  TimeGrid grid;
  TariffBook book;
  CommunityTariffs community;
  std::vector<BuildingSeries> buildings;
  std::vector<std::vector<EVRequest>> evs;  // per building, validated
};

Scenario build_scenario(const ScenarioConfig& cfg);

enum class RunMode { baseline, individual, community };

// "baseline" | "individual" | "community"; DomainError otherwise.
RunMode mode_from_string(const std::string& s);
std::string to_string(RunMode mode);

struct ScenarioRun {
  RunMode mode = RunMode::baseline;
  ScheduleSolution solution;
  double total_electricity_eur = 0.0;
  double total_ev_revenue_eur = 0.0;
  double total_objective_eur = 0.0;
  SolveStatus solver_status = SolveStatus::optimal;
  double gap = 0.0;
  long nodes = 0;
  std::string infeasible_tag;  // row tag when solver_status == infeasible
};

// Runs one management mode:
//  - baseline: no EVs, no trading; pure cost integration of the net loads;
//  - individual: one MILP per building, community flows absent (zero);
//  - community: one joint MILP with per-step community exchange.
// Infeasibility is reported in the run (status + violated row tag), not
// thrown. `export_lp_path`, when non-empty, dumps the (joint or per-building
// suffixed) model before solving.
ScenarioRun run_mode(const Scenario& scn, RunMode mode,
                     const SolveOptions& opts = {},
                     const std::string& export_lp_path = {});

// ---------------------------------------------------------------------------
// Brute-force oracle

// A hand-sized scenario the oracle can enumerate exactly: at most 2
// buildings, 8 steps, one EV per building, and requests aligned to the grid
// at full power.
struct MicroScenario {
  std::string id;
  TimeGrid grid;
  TariffBook book;
  std::optional<CommunityTariffs> community;
  std::vector<BuildingSeries> buildings;
  std::vector<std::vector<EVRequest>> evs;  // <= 1 per building
};

struct OracleResult {
  double objective = 0.0;  // exact optimum over the enumerated schedules
  long optima = 0;         // number of enumerated schedules attaining it
};

// Enumerates every per-step EV decision in {idle, charge at p_max,
// discharge at p_max}, filters infeasible schedules, prices community
// exchange per step at the better of (no trade, full matched trade), and
// returns the minimum total objective. Throws TooLarge when the scenario
// exceeds the bounds above or a request is not grid-aligned.
OracleResult oracle_enumerate_detail(const MicroScenario& ms);
double oracle_enumerate(const MicroScenario& ms);

// Same micro scenario through the regular model builder and branch and
// bound, at rel_gap 1e-9.
double micro_milp_objective(const MicroScenario& ms);

// The fixed verification battery (>= 20 micro scenarios) and its runner.
std::vector<MicroScenario> oracle_battery();

struct OracleCheck {
  std::string id;
  double oracle = 0.0;
  double milp = 0.0;
  bool pass = false;  // |milp - oracle| <= 1e-6 * max(1, |oracle|)
};
std::vector<OracleCheck> run_oracle_suite();

}  // namespace flexcomm
