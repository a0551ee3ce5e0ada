// Result emission: cost tables by building and mode, and per-step series
// suitable for plotting net load and community power flows.

#pragma once

#include <string>
#include <vector>

#include "flexcomm/scenario.hpp"

namespace flexcomm {

// A mode required for a table is absent or unsolved.
struct ModeMissing : Error {
  using Error::Error;
};

// One row of the cost table. Monetary values in EUR over the horizon.
// ev_revenue columns carry the reporting sign convention: negative values
// mean money flowing in the building's favor.
struct CostTableRow {
  std::string building;
  double base_ce = 0.0;   // baseline electricity cost
  double ind_ce = 0.0;    // individual-mode electricity cost
  double ind_cev = 0.0;   // individual-mode EV account (negative = revenue)
  double ind_obj = 0.0;   // individual-mode objective
  double com_ce = 0.0;    // community-mode electricity cost
  double com_cev = 0.0;   // community-mode EV account
  double com_obj = 0.0;   // community-mode objective
};

// Everything emit_cost_table / emit_series produced.
struct ReportBundle {
  std::vector<CostTableRow> rows;   // one per building
  CostTableRow total;               // exact column sums, building = "total"
  std::vector<std::string> files;   // manifest of files written (paths)
};

// Assembles per-building rows plus the exact totals row from three runs of
// the same scenario. Throws ModeMissing when a run is of the wrong mode,
// unsolved, or the building sets disagree.
ReportBundle build_cost_table(const ScenarioRun& baseline,
                              const ScenarioRun& individual,
                              const ScenarioRun& community);

// Renderers. The CSV keeps full precision; the text table displays at
// 0.1 EUR precision with aligned columns.
std::string render_cost_table_csv(const ReportBundle& bundle);
std::string render_cost_table_text(const ReportBundle& bundle);

// Writes costs.csv and costs.txt into out_dir and returns the bundle with
// its manifest filled in. Throws IoError on write failure.
ReportBundle emit_cost_table(const ScenarioRun& baseline,
                             const ScenarioRun& individual,
                             const ScenarioRun& community,
                             const std::string& out_dir);

// Per-building series for one solved run: step, baseline net load, net load
// including EV charging/discharging, and the signed community flow
// (export positive). Writes series_<mode>_<building>.csv per building and
// returns the paths. Throws ModeMissing when the run is unsolved.
std::vector<std::string> emit_series(const Scenario& scenario,
                                     const ScenarioRun& run,
                                     const std::string& out_dir);

}  // namespace flexcomm
