#include "flexcomm/builder.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace flexcomm {

namespace {

// Rows must carry strictly increasing variable ids; collect terms in any
// order, then sort (duplicates would indicate a builder bug, so they throw).
MipRow make_row(std::vector<std::pair<int, double>> terms, RowSense sense,
                double rhs, const char* tag) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  MipRow row;
  row.sense = sense;
  row.rhs = rhs;
  row.tag = tag;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (k > 0 && terms[k].first == terms[k - 1].first)
      throw DomainError("duplicate variable in constraint row: " + row.tag);
    if (terms[k].second == 0.0) continue;
    row.idx.push_back(terms[k].first);
    row.coef.push_back(terms[k].second);
  }
  return row;
}

}  // namespace

int VariableLayout::charge_var(int ev, int step) const {
  const EvVarBlock& blk = evs.at(static_cast<std::size_t>(ev));
  const int k = step - blk.arrival_step;
  if (k < 0 || k >= static_cast<int>(blk.charge.size())) return -1;
  return blk.charge[static_cast<std::size_t>(k)];
}

int VariableLayout::discharge_var(int ev, int step) const {
  const EvVarBlock& blk = evs.at(static_cast<std::size_t>(ev));
  const int k = step - blk.arrival_step;
  if (k < 0 || k >= static_cast<int>(blk.discharge.size())) return -1;
  return blk.discharge[static_cast<std::size_t>(k)];
}

ScheduleModelBuilder::ScheduleModelBuilder(const TimeGrid& grid, const TariffBook& book)
    : grid_(grid), book_(book) {
  check_book(grid_, book_);
}

void ScheduleModelBuilder::enable_community(const CommunityTariffs& community) {
  community_ = community;
}

void ScheduleModelBuilder::set_big_m(double big_m_kw) { big_m_override_ = big_m_kw; }

int ScheduleModelBuilder::add_building(const BuildingSeries& b, std::vector<EVRequest> evs) {
  check_series(grid_, b);
  std::vector<EVRequest> validated;
  validated.reserve(evs.size());
  for (const EVRequest& r : evs) validated.push_back(validate_request(r, grid_));
  buildings_.push_back(b);
  requests_.push_back(std::move(validated));
  return static_cast<int>(buildings_.size()) - 1;
}

BuiltModel ScheduleModelBuilder::build() {
  if (built_) throw DomainError("ScheduleModelBuilder::build is single-shot");
  built_ = true;

  BuiltModel out;
  out.grid = grid_;
  out.book = book_;
  out.community = community_;
  out.buildings = buildings_;
  out.requests = requests_;

  MipModel& m = out.mip;
  VariableLayout& lay = out.layout;
  lay.steps = grid_.steps;

  const int n_buildings = static_cast<int>(buildings_.size());
  const double dt = grid_.dt_hours;

  // Big-M per building: worst-case |imbalance| = max |net load| plus every
  // EV at full power, plus a 1 kW margin when derived automatically.
  std::vector<double> big_m(static_cast<std::size_t>(n_buildings), 0.0);
  for (int b = 0; b < n_buildings; ++b) {
    double need = buildings_[b].net_load_kw.size() > 0
                      ? buildings_[b].net_load_kw.cwiseAbs().maxCoeff()
                      : 0.0;
    double p_max = 0.0;
    for (const EVRequest& r : requests_[b])
      p_max = std::max({p_max, r.p_charge_max_kw, r.p_discharge_max_kw});
    need += static_cast<double>(requests_[b].size()) * p_max;
    if (big_m_override_) {
      if (*big_m_override_ < need)
        throw BadBigM("big-M " + std::to_string(*big_m_override_) +
                      " kW is below the required " + std::to_string(need) +
                      " kW for building " + buildings_[b].id);
      big_m[b] = *big_m_override_;
    } else {
      big_m[b] = need + 1.0;
    }
    out.big_m_kw = std::max(out.big_m_kw, big_m[b]);
  }

  // --- Variables -----------------------------------------------------------
  // Per building: each EV's charge then discharge window series, then per
  // step the grid pair, the community pair with its direction binary, and a
  // grid-split binary on steps whose tariffs would admit a buy-and-resell
  // cycle (import price not above export compensation).
  for (int b = 0; b < n_buildings; ++b) {
    for (const EVRequest& r : requests_[b]) {
      EvVarBlock blk;
      blk.building = b;
      blk.arrival_step = r.arrival_step;
      const int window = r.window_steps();
      for (int k = 0; k < window; ++k) {
        const int h = r.arrival_step + k;
        const double fee_per_kw = (dt / r.p_charge_max_kw) *
                                  (book_.flexibility_eur_h + book_.charging_eur_h[h]);
        blk.charge.push_back(m.add_var(0.0, r.p_charge_max_kw, -fee_per_kw));
      }
      if (r.t_discharge_allow_h > 0.0) {
        const double reward_per_kw =
            (dt / r.p_discharge_max_kw) *
            (book_.discharging_eur_h - book_.flexibility_eur_h);
        for (int k = 0; k < window; ++k)
          blk.discharge.push_back(m.add_var(0.0, r.p_discharge_max_kw, reward_per_kw));
      }
      // Constant part of the EV service revenue, negated into the
      // minimisation offset: parking income minus the full-window
      // flexibility reward baseline.
      m.objective_offset += r.t_park_h * (book_.flexibility_eur_h - book_.parking_eur_h);
      lay.evs.push_back(std::move(blk));
    }

    BuildingVarBlock bb;
    for (int h = 0; h < grid_.steps; ++h) {
      bb.grid_import.push_back(m.add_var(0.0, kInf, dt * book_.grid_import_eur_kwh[h]));
      bb.grid_export.push_back(m.add_var(0.0, kInf, -dt * book_.grid_export_comp_eur_kwh));
      if (community_) {
        bb.comm_export.push_back(m.add_var(0.0, kInf, -dt * community_->export_comp_eur_kwh));
        bb.comm_import.push_back(m.add_var(0.0, kInf, dt * community_->import_price_eur_kwh));
        bb.direction.push_back(m.add_var(0.0, 1.0, 0.0, /*is_binary=*/true));
      }
      const bool split_needed =
          book_.grid_import_eur_kwh[h] <= book_.grid_export_comp_eur_kwh;
      if (!split_needed)
        bb.grid_direction.push_back(-1);
      else if (community_)
        bb.grid_direction.push_back(bb.direction[static_cast<std::size_t>(h)]);
      else
        bb.grid_direction.push_back(m.add_var(0.0, 1.0, 0.0, /*is_binary=*/true));
    }
    lay.buildings.push_back(std::move(bb));
  }

  // --- EV rows ---------------------------------------------------------
  {
    std::size_t e = 0;
    for (int b = 0; b < n_buildings; ++b) {
      for (const EVRequest& r : requests_[b]) {
        const EvVarBlock& blk = lay.evs[e++];
        const int window = static_cast<int>(blk.charge.size());

        // Charging must meet the request exactly, plus replacement of the
        // energy round-tripped through the battery.
        std::vector<std::pair<int, double>> terms;
        for (int k = 0; k < window; ++k) terms.emplace_back(blk.charge[k], dt);
        for (int k = 0; k < static_cast<int>(blk.discharge.size()); ++k)
          terms.emplace_back(blk.discharge[k], -dt / r.efficiency);
        m.add_row(make_row(std::move(terms), RowSense::eq,
                           r.t_charge_req_h * r.p_charge_max_kw, "eq6"));

        if (!blk.discharge.empty()) {
          // Total discharge within the user's allowance.
          std::vector<std::pair<int, double>> cap;
          for (int id : blk.discharge) cap.emplace_back(id, dt);
          m.add_row(make_row(std::move(cap), RowSense::le,
                             r.t_discharge_allow_h * r.p_discharge_max_kw, "eq7a"));
          // Battery cannot go below its arrival charge: normalized discharge
          // never ahead of normalized charge at any prefix.
          for (int x = 0; x < window; ++x) {
            std::vector<std::pair<int, double>> pre;
            for (int k = 0; k <= x; ++k) {
              pre.emplace_back(blk.charge[k], -dt / r.p_charge_max_kw);
              pre.emplace_back(blk.discharge[k], dt / r.p_discharge_max_kw);
            }
            m.add_row(make_row(std::move(pre), RowSense::le, 0.0, "eq7b"));
          }
        }
      }
    }
  }

  // --- Building rows ---------------------------------------------------
  for (int b = 0; b < n_buildings; ++b) {
    const BuildingVarBlock& bb = lay.buildings[b];
    const double M = big_m[b];
    // EV blocks owned by this building.
    std::vector<int> owned;
    for (std::size_t e = 0; e < lay.evs.size(); ++e)
      if (lay.evs[e].building == b) owned.push_back(static_cast<int>(e));

    for (int h = 0; h < grid_.steps; ++h) {
      const double load = buildings_[b].net_load_kw[h];

      // Imbalance terms (net load side): + charge - discharge.
      std::vector<std::pair<int, double>> imb;
      for (int e : owned) {
        const int c = lay.charge_var(e, h);
        if (c >= 0) imb.emplace_back(c, 1.0);
        const int d = lay.discharge_var(e, h);
        if (d >= 0) imb.emplace_back(d, -1.0);
      }

      // Power balance: grid_import - grid_export + comm_import - comm_export
      // = load + charge - discharge.
      {
        std::vector<std::pair<int, double>> t;
        for (const auto& [id, c] : imb) t.emplace_back(id, -c);
        t.emplace_back(bb.grid_import[h], 1.0);
        t.emplace_back(bb.grid_export[h], -1.0);
        if (community_) {
          t.emplace_back(bb.comm_import[h], 1.0);
          t.emplace_back(bb.comm_export[h], -1.0);
        }
        m.add_row(make_row(std::move(t), RowSense::eq, load, "balance"));
      }

      if (community_) {
        const int ce = bb.comm_export[h];
        const int ci = bb.comm_import[h];
        const int d = bb.direction[h];
        // Direction gating: d = 1 allows export, d = 0 allows import.
        m.add_row(make_row({{ce, 1.0}, {d, -M}}, RowSense::le, 0.0, "eq10"));
        m.add_row(make_row({{ci, 1.0}, {d, M}}, RowSense::le, M, "eq10"));
        // Magnitude caps: export at most the building's surplus, import at
        // most its deficit (imbalance = load + charge - discharge).
        std::vector<std::pair<int, double>> cap_e = imb;
        cap_e.emplace_back(ce, 1.0);
        cap_e.emplace_back(d, M);
        m.add_row(make_row(std::move(cap_e), RowSense::le, M - load, "eq11"));
        std::vector<std::pair<int, double>> cap_i;
        for (const auto& [id, c] : imb) cap_i.emplace_back(id, -c);
        cap_i.emplace_back(ci, 1.0);
        cap_i.emplace_back(d, -M);
        m.add_row(make_row(std::move(cap_i), RowSense::le, load, "eq11"));
      }

      if (bb.grid_direction[h] >= 0) {
        // Tariffs at this step admit simultaneous grid import and export;
        // gate the pair on a binary (1 = export side, matching the
        // community direction when present).
        const int g = bb.grid_direction[h];
        m.add_row(make_row({{bb.grid_import[h], 1.0}, {g, M}}, RowSense::le, M,
                           "bigM-link"));
        m.add_row(make_row({{bb.grid_export[h], 1.0}, {g, -M}}, RowSense::le, 0.0,
                           "bigM-link"));
      }
    }
  }

  // --- Community cancellation -------------------------------------------
  if (community_) {
    for (int h = 0; h < grid_.steps; ++h) {
      std::vector<std::pair<int, double>> t;
      for (int b = 0; b < n_buildings; ++b) {
        t.emplace_back(lay.buildings[b].comm_export[h], 1.0);
        t.emplace_back(lay.buildings[b].comm_import[h], -1.0);
      }
      m.add_row(make_row(std::move(t), RowSense::eq, 0.0, "eq12"));
    }
  }

  m.validate();
  return out;
}

ScheduleSolution extract_solution(const BuiltModel& built, const SolveResult& result) {
  if (result.assignment.size() != built.mip.n_vars)
    throw DomainError("solver result carries no assignment for this model");
  const Eigen::VectorXd& x = result.assignment;
  const int steps = built.grid.steps;

  ScheduleSolution sol;
  sol.status = result.status == SolveStatus::optimal ? SolutionStatus::optimal
                                                     : SolutionStatus::feasible_with_gap;
  sol.best_bound_eur = result.best_bound;
  sol.nodes_explored = result.nodes;

  std::size_t ev_block = 0;
  double total = 0.0;
  for (std::size_t b = 0; b < built.buildings.size(); ++b) {
    const BuildingVarBlock& bb = built.layout.buildings[b];
    BuildingSolution bs;
    bs.building_id = built.buildings[b].id;
    bs.comm_export_kw = Eigen::VectorXd::Zero(steps);
    bs.comm_import_kw = Eigen::VectorXd::Zero(steps);
    bs.grid_residual_kw = Eigen::VectorXd::Zero(steps);
    for (int h = 0; h < steps; ++h) {
      bs.grid_residual_kw[h] = x[bb.grid_import[h]] - x[bb.grid_export[h]];
      if (built.community) {
        bs.comm_export_kw[h] = x[bb.comm_export[h]];
        bs.comm_import_kw[h] = x[bb.comm_import[h]];
      }
    }
    for (const EVRequest& r : built.requests[b]) {
      const EvVarBlock& blk = built.layout.evs[ev_block++];
      EvSchedule es;
      es.ev_id = r.id;
      es.charge_kw = Eigen::VectorXd::Zero(steps);
      es.discharge_kw = Eigen::VectorXd::Zero(steps);
      for (std::size_t k = 0; k < blk.charge.size(); ++k)
        es.charge_kw[blk.arrival_step + static_cast<int>(k)] = x[blk.charge[k]];
      for (std::size_t k = 0; k < blk.discharge.size(); ++k)
        es.discharge_kw[blk.arrival_step + static_cast<int>(k)] = x[blk.discharge[k]];
      bs.evs.push_back(std::move(es));
    }
    bs.costs = assemble_costs(built.grid, built.book, built.community,
                              built.buildings[b], built.requests[b], bs);
    total += bs.costs.objective_eur;
    sol.buildings.push_back(std::move(bs));
  }
  sol.objective_eur = total;

  if (std::abs(total - result.objective) >
      1e-6 * std::max(1.0, std::abs(result.objective)))
    throw InconsistentSolution(
        "recomputed objective " + std::to_string(total) +
        " disagrees with solver objective " + std::to_string(result.objective));

  const std::vector<std::string> violations =
      audit_solution(built.grid, built.buildings, built.requests, sol);
  if (!violations.empty())
    throw InconsistentSolution("solution fails invariant audit: " + violations.front());
  return sol;
}

}  // namespace flexcomm
