#pragma once

// Translation of a concrete scheduling problem (buildings, EV requests,
// tariffs) into a MipModel, and mapping of solver assignments back into a
// ScheduleSolution with independently recomputed costs.

#include <optional>
#include <string>
#include <vector>

#include "flexcomm/core.hpp"
#include "flexcomm/costs.hpp"
#include "flexcomm/mip.hpp"
#include "flexcomm/tariffs.hpp"

namespace flexcomm {

// An explicitly supplied big-M is smaller than the worst-case imbalance it
// must dominate.
struct BadBigM : Error {
  using Error::Error;
};

// The costs recomputed from a solver assignment disagree with the solver's
// own objective, or the assignment violates a model invariant.
struct InconsistentSolution : Error {
  using Error::Error;
};

// Variable ids for one EV. `charge`/`discharge` hold one id per step of the
// parking window [arrival_step, arrival_step + charge.size()); steps outside
// the window have no variable and are fixed at zero by omission. `discharge`
// is empty when the request allows no discharging.
struct EvVarBlock {
  int building = 0;
  int arrival_step = 0;
  std::vector<int> charge;
  std::vector<int> discharge;
};

// Variable ids for one building, one entry per grid step. The community
// vectors are empty when trading is disabled. `direction` is the step's
// binary: 1 = the building exports to the community, 0 = it imports.
// `grid_direction[h]` is the binary gating the grid import/export pair at
// step h, or -1 where the tariffs already make the split self-enforcing
// (import strictly dearer than export compensation).
struct BuildingVarBlock {
  std::vector<int> grid_import;
  std::vector<int> grid_export;
  std::vector<int> comm_export;
  std::vector<int> comm_import;
  std::vector<int> direction;
  std::vector<int> grid_direction;
};

struct VariableLayout {
  int steps = 0;
  std::vector<EvVarBlock> evs;  // across buildings, in registration order
  std::vector<BuildingVarBlock> buildings;

  // Id of the charge/discharge variable of EV block `ev` at absolute step
  // `step`, or -1 when the step is outside the window (or the EV cannot
  // discharge).
  int charge_var(int ev, int step) const;
  int discharge_var(int ev, int step) const;
};

// The assembled model plus everything needed to interpret an assignment.
struct BuiltModel {
  MipModel mip;
  VariableLayout layout;
  TimeGrid grid;
  std::vector<BuildingSeries> buildings;
  std::vector<std::vector<EVRequest>> requests;  // parallel to `buildings`
  TariffBook book;
  std::optional<CommunityTariffs> community;
  double big_m_kw = 0.0;  // largest big-M used by any building
};

// Assembles the scheduling MILP. Usage: construct, optionally
// enable_community(), add_building() for every participant, then build().
//
// Row tags: eq6 (charge/discharge energy balance per EV), eq7a (total
// discharge allowance), eq7b (prefix discharge-behind-charge), eq10
// (community direction gating), eq11 (community flow capped by the
// building's own imbalance), eq12 (community cancellation per step),
// balance (building power balance), bigM-link (grid split gating on steps
// whose tariffs would otherwise admit simultaneous import and export).
class ScheduleModelBuilder {
 public:
  // Throws DimensionMismatch/DomainError via check_book.
  ScheduleModelBuilder(const TimeGrid& grid, const TariffBook& book);

  // Adds community trading variables, rows and prices for every building.
  void enable_community(const CommunityTariffs& community);

  // Replaces the automatic per-building big-M with a fixed value. Throws
  // BadBigM at build() time if it is below any building's required minimum
  // (max |net load| plus EV count times the largest power limit).
  void set_big_m(double big_m_kw);

  // Registers a building and its EV requests. Requests are validated and
  // normalised here (throws the model-core validation errors). Returns the
  // building index.
  int add_building(const BuildingSeries& b, std::vector<EVRequest> evs);

  // Assembles and returns the model. The builder is single-shot.
  BuiltModel build();

 private:
  TimeGrid grid_;
  TariffBook book_;
  std::optional<CommunityTariffs> community_;
  std::optional<double> big_m_override_;
  std::vector<BuildingSeries> buildings_;
  std::vector<std::vector<EVRequest>> requests_;
  bool built_ = false;
};

// Maps a solver result carrying an assignment back to power series and
// costs. Costs are recomputed from the series alone; throws
// InconsistentSolution if they disagree with the solver objective beyond
// 1e-6 relative or if any constraint invariant fails. Throws DomainError if
// the result carries no assignment.
ScheduleSolution extract_solution(const BuiltModel& built, const SolveResult& result);

}  // namespace flexcomm
