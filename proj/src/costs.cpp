#include "flexcomm/costs.hpp"

#include <cmath>

namespace flexcomm {

namespace {

// Treat missing (size-0) series as all-zero without allocating.
double at_or_zero(const Eigen::VectorXd& v, int i) {
  return v.size() == 0 ? 0.0 : v[i];
}

std::string step_label(const std::string& where, int step) {
  return where + " at step " + std::to_string(step);
}

}  // namespace

Eigen::VectorXd residual_series(const Eigen::VectorXd& net_load_kw,
                                const BuildingSolution& b) {
  Eigen::VectorXd r = net_load_kw;
  for (const auto& ev : b.evs) {
    if (ev.charge_kw.size() > 0) r += ev.charge_kw;
    if (ev.discharge_kw.size() > 0) r -= ev.discharge_kw;
  }
  if (b.comm_export_kw.size() > 0) r += b.comm_export_kw;
  if (b.comm_import_kw.size() > 0) r -= b.comm_import_kw;
  return r;
}

EvCost ev_cost(const TimeGrid& grid, const TariffBook& book, const EVRequest& req,
               const EvSchedule& sched) {
  const auto check_len = [&](const Eigen::VectorXd& v, const char* what) {
    if (v.size() != 0 && v.size() != grid.steps)
      throw DimensionMismatch("EV '" + req.id + "': " + what +
                              " series length does not match grid");
  };
  check_len(sched.charge_kw, "charge");
  check_len(sched.discharge_kw, "discharge");

  double t_charge = 0.0, t_discharge = 0.0, charging_fee = 0.0;
  for (int h = 0; h < grid.steps; ++h) {
    const double c = at_or_zero(sched.charge_kw, h);
    if (c > 1e-12) {
      const double u = used_period(c, req.p_charge_max_kw, grid.dt_hours);
      t_charge += u;
      charging_fee += u * book.charging_eur_h[h];
    }
    const double d = at_or_zero(sched.discharge_kw, h);
    if (d > 1e-12) {
      if (!(req.p_discharge_max_kw > 0.0))
        throw DomainError("EV '" + req.id + "': discharging with zero p_discharge_max");
      t_discharge += used_period(d, req.p_discharge_max_kw, grid.dt_hours);
    }
  }

  EvCost out;
  out.ev_id = req.id;
  out.parking_eur = req.t_park_h * book.parking_eur_h;
  out.flexibility_eur =
      -(req.t_park_h - t_charge - t_discharge) * book.flexibility_eur_h;
  out.charging_eur = charging_fee;
  out.discharging_eur = -t_discharge * book.discharging_eur_h;
  out.total_eur = out.parking_eur + out.flexibility_eur + out.charging_eur +
                  out.discharging_eur;
  return out;
}

CostBreakdown assemble_costs(const TimeGrid& grid, const TariffBook& book,
                             const std::optional<CommunityTariffs>& community,
                             const BuildingSeries& building,
                             const std::vector<EVRequest>& evs,
                             const BuildingSolution& sol) {
  check_series(grid, building);
  check_book(grid, book);
  if (evs.size() != sol.evs.size())
    throw DimensionMismatch("building '" + building.id +
                            "': EV schedule count does not match requests");
  if (!community) {
    const double flow =
        (sol.comm_export_kw.size() ? sol.comm_export_kw.cwiseAbs().maxCoeff() : 0.0) +
        (sol.comm_import_kw.size() ? sol.comm_import_kw.cwiseAbs().maxCoeff() : 0.0);
    if (flow > 1e-9)
      throw DomainError("building '" + building.id +
                        "': community flows present without community tariffs");
  }

  CostBreakdown out;
  const Eigen::VectorXd residual = residual_series(building.net_load_kw, sol);
  for (int h = 0; h < grid.steps; ++h) {
    const double imp = std::max(residual[h], 0.0);
    const double exp = std::max(-residual[h], 0.0);
    double step_cost = imp * book.grid_import_eur_kwh[h] -
                       exp * book.grid_export_comp_eur_kwh;
    if (community) {
      step_cost += at_or_zero(sol.comm_import_kw, h) * community->import_price_eur_kwh -
                   at_or_zero(sol.comm_export_kw, h) * community->export_comp_eur_kwh;
    }
    out.electricity_cost_eur += grid.dt_hours * step_cost;
  }
  for (std::size_t i = 0; i < evs.size(); ++i) {
    if (evs[i].id != sol.evs[i].ev_id)
      throw DimensionMismatch("building '" + building.id +
                              "': EV schedule order does not match requests");
    out.per_ev.push_back(ev_cost(grid, book, evs[i], sol.evs[i]));
    out.ev_revenue_eur += out.per_ev.back().total_eur;
  }
  out.objective_eur = out.electricity_cost_eur - out.ev_revenue_eur;
  return out;
}

std::vector<std::string> audit_solution(
    const TimeGrid& grid, const std::vector<BuildingSeries>& buildings,
    const std::vector<std::vector<EVRequest>>& requests,
    const ScheduleSolution& sol) {
  if (buildings.size() != requests.size() ||
      buildings.size() != sol.buildings.size())
    throw DimensionMismatch("audit: building/request/solution counts differ");

  constexpr double kPowerTol = 1e-9;   // kW
  constexpr double kEnergyTol = 1e-6;  // kWh
  constexpr double kPrefixTol = 1e-9;  // max-power-equivalent hours
  constexpr double kFlowTol = 1e-6;    // kW, cancellation and imbalance caps
  std::vector<std::string> bad;

  for (std::size_t b = 0; b < buildings.size(); ++b) {
    const auto& bs = sol.buildings[b];
    const std::string bl = "building '" + buildings[b].id + "'";
    if (bs.evs.size() != requests[b].size()) {
      bad.push_back(bl + ": EV schedule count mismatch");
      continue;
    }
    for (std::size_t e = 0; e < requests[b].size(); ++e) {
      const EVRequest& r = requests[b][e];
      const EvSchedule& s = bs.evs[e];
      const std::string el = bl + ", EV '" + r.id + "'";
      double charge_kwh = 0.0, discharge_kwh = 0.0;
      double cum_charge_h = 0.0, cum_discharge_h = 0.0;
      for (int h = 0; h < grid.steps; ++h) {
        const double c = at_or_zero(s.charge_kw, h);
        const double d = at_or_zero(s.discharge_kw, h);
        const bool inside = h >= r.arrival_step && h < r.departure_step;
        if (!inside && (std::abs(c) > kPowerTol || std::abs(d) > kPowerTol))
          bad.push_back(step_label(el + ": power outside parking window", h));
        if (c < -kPowerTol || c > r.p_charge_max_kw + kPowerTol)
          bad.push_back(step_label(el + ": charge power out of bounds", h));
        if (d < -kPowerTol || d > r.p_discharge_max_kw + kPowerTol)
          bad.push_back(step_label(el + ": discharge power out of bounds", h));
        charge_kwh += c * grid.dt_hours;
        discharge_kwh += d * grid.dt_hours;
        if (r.p_charge_max_kw > 0.0) cum_charge_h += c * grid.dt_hours / r.p_charge_max_kw;
        if (r.p_discharge_max_kw > 0.0)
          cum_discharge_h += d * grid.dt_hours / r.p_discharge_max_kw;
        if (inside && cum_discharge_h > cum_charge_h + kPrefixTol)
          bad.push_back(step_label(el + ": discharge ahead of charge", h));
      }
      if (r.parking_only()) {
        if (charge_kwh > kEnergyTol || discharge_kwh > kEnergyTol)
          bad.push_back(el + ": parking-only EV has power scheduled");
        continue;
      }
      const double target_kwh =
          r.t_charge_req_h * r.p_charge_max_kw + discharge_kwh / r.efficiency;
      if (std::abs(charge_kwh - target_kwh) > kEnergyTol)
        bad.push_back(el + ": energy balance off by " +
                      std::to_string(charge_kwh - target_kwh) + " kWh");
      if (discharge_kwh > r.t_discharge_allow_h * r.p_discharge_max_kw + kEnergyTol)
        bad.push_back(el + ": discharged beyond the allowance");
    }

    // Community direction, caps, and stored residual consistency.
    const Eigen::VectorXd resid = residual_series(buildings[b].net_load_kw, bs);
    for (int h = 0; h < grid.steps; ++h) {
      const double ce = at_or_zero(bs.comm_export_kw, h);
      const double ci = at_or_zero(bs.comm_import_kw, h);
      if (ce < -kPowerTol || ci < -kPowerTol)
        bad.push_back(step_label(bl + ": negative community flow", h));
      if (ce * ci > 1e-9)
        bad.push_back(step_label(bl + ": simultaneous community import and export", h));
      const double imbalance = resid[h] - ce + ci;  // net load + EV power
      if (ce > std::max(0.0, -imbalance) + kFlowTol)
        bad.push_back(step_label(bl + ": community export exceeds surplus", h));
      if (ci > std::max(0.0, imbalance) + kFlowTol)
        bad.push_back(step_label(bl + ": community import exceeds deficit", h));
      if (bs.grid_residual_kw.size() > 0 &&
          std::abs(bs.grid_residual_kw[h] - resid[h]) > kFlowTol)
        bad.push_back(step_label(bl + ": stored grid residual inconsistent", h));
    }
  }

  // Community cancellation: traded power nets to zero at each step.
  for (int h = 0; h < grid.steps; ++h) {
    double net = 0.0;
    for (const auto& bs : sol.buildings)
      net += at_or_zero(bs.comm_export_kw, h) - at_or_zero(bs.comm_import_kw, h);
    if (std::abs(net) > kFlowTol)
      bad.push_back(step_label("community exchange does not cancel", h));
  }
  return bad;
}

}  // namespace flexcomm
