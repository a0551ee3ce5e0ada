#pragma once

// Schedule solutions and independent cost evaluation.
//
// Everything here works on plain power series and the tariff book; nothing
// depends on the optimisation model. The solver path is checked against this
// module, so keep the formulas self-contained.

#include <optional>
#include <string>
#include <vector>

#include "flexcomm/core.hpp"
#include "flexcomm/tariffs.hpp"

namespace flexcomm {

// Per-EV money flows, all in EUR for the whole day. `parking` and `charging`
// are paid by the user to the building; `flexibility` and `discharging` are
// rewards paid back to the user and therefore non-positive. `total` is the
// net amount the building receives for serving this EV.
struct EvCost {
  std::string ev_id;
  double parking_eur = 0.0;
  double flexibility_eur = 0.0;
  double charging_eur = 0.0;
  double discharging_eur = 0.0;
  double total_eur = 0.0;
};

// One building's cost decomposition: electricity cost (grid plus community,
// EUR), EV service revenue (EUR, received), and the minimised objective
// contribution electricity_cost - ev_revenue.
struct CostBreakdown {
  double electricity_cost_eur = 0.0;
  double ev_revenue_eur = 0.0;
  double objective_eur = 0.0;
  std::vector<EvCost> per_ev;
};

// Power schedule for one EV over the whole grid (zero outside its window).
struct EvSchedule {
  std::string ev_id;
  Eigen::VectorXd charge_kw;
  Eigen::VectorXd discharge_kw;
};

// One building's part of a schedule solution. Community flows are magnitudes:
// comm_export_kw is power sold into the community, comm_import_kw power
// bought from it. grid_residual_kw is signed (positive = grid import).
struct BuildingSolution {
  std::string building_id;
  std::vector<EvSchedule> evs;
  Eigen::VectorXd comm_export_kw;
  Eigen::VectorXd comm_import_kw;
  Eigen::VectorXd grid_residual_kw;
  CostBreakdown costs;
};

enum class SolutionStatus { optimal, feasible_with_gap, infeasible };

struct ScheduleSolution {
  SolutionStatus status = SolutionStatus::infeasible;
  std::vector<BuildingSolution> buildings;
  double objective_eur = 0.0;
  double best_bound_eur = 0.0;
  long nodes_explored = 0;
};

// Net power the grid sees for one building: net load plus EV charging minus
// EV discharging plus community export minus community import (conservation
// at the building node). Positive = grid import, negative = grid export.
Eigen::VectorXd residual_series(const Eigen::VectorXd& net_load_kw,
                                const BuildingSolution& b);

// The EV service bill for one schedule: parking, flexibility reward, charging
// fees, discharging reward. Throws DimensionMismatch on series length issues.
EvCost ev_cost(const TimeGrid& grid, const TariffBook& book, const EVRequest& req,
               const EvSchedule& sched);

// Full cost decomposition for one building given its solved power series.
// `community` prices the comm_* series; pass std::nullopt for runs without
// trading (the comm_* series must then be zero).
CostBreakdown assemble_costs(const TimeGrid& grid, const TariffBook& book,
                             const std::optional<CommunityTariffs>& community,
                             const BuildingSeries& building,
                             const std::vector<EVRequest>& evs,
                             const BuildingSolution& sol);

// Constraint audit of a full solution against the original inputs. Returns
// human-readable violation descriptions; empty means the solution satisfies
// per-EV energy balance (1e-6 kWh), discharge-before-charge prefix dominance
// (1e-9 h), power bounds and window confinement, one community direction per
// step (flow product <= 1e-9), community cancellation (1e-6 kW) and the
// imbalance cap on community flows (1e-6 kW).
std::vector<std::string> audit_solution(
    const TimeGrid& grid, const std::vector<BuildingSeries>& buildings,
    const std::vector<std::vector<EVRequest>>& requests,
    const ScheduleSolution& sol);

}  // namespace flexcomm
