// Brute-force verification oracle: exact enumeration of bang-bang EV
// schedules on hand-sized scenarios, with per-step community matching. The
// cost arithmetic here is written independently of the cost-assembly module
// so the two paths cross-check each other.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "flexcomm/builder.hpp"
#include "flexcomm/scenario.hpp"

namespace flexcomm {

namespace {

constexpr int kMaxSteps = 8;
constexpr int kMaxBuildings = 2;
constexpr double kAlignTol = 1e-9;

struct EvPlan {
  std::vector<int> action;  // per window step: 0 idle, 1 charge, 2 discharge
  double t_charge_h = 0.0;     // total normalized charging hours
  double t_discharge_h = 0.0;  // total normalized discharging hours
};

void require_aligned(double hours, double dt, const std::string& what) {
  const double k = hours / dt;
  if (std::abs(k - std::round(k)) > kAlignTol)
    throw TooLarge(what + " (" + std::to_string(hours) +
                   " h) is not aligned to dt");
}

// All schedules of one EV that satisfy the energy balance, the discharge
// allowance and the prefix rule, charging/discharging at full power only.
std::vector<EvPlan> enumerate_plans(const EVRequest& r, double dt) {
  require_aligned(r.t_charge_req_h, dt, "requested charging period");
  const int window = r.window_steps();
  const bool v2b = r.t_discharge_allow_h > 0.0;
  std::vector<EvPlan> plans;
  long combos = 1;
  for (int k = 0; k < window; ++k) combos *= v2b ? 3 : 2;
  for (long code = 0; code < combos; ++code) {
    EvPlan plan;
    plan.action.resize(static_cast<std::size_t>(window));
    long rest = code;
    int nc = 0, nd = 0;
    bool ok = true;
    int prefix_c = 0, prefix_d = 0;
    for (int k = 0; k < window; ++k) {
      const int a = static_cast<int>(rest % (v2b ? 3 : 2));
      rest /= v2b ? 3 : 2;
      plan.action[static_cast<std::size_t>(k)] = a;
      if (a == 1) {
        ++nc;
        ++prefix_c;
      } else if (a == 2) {
        ++nd;
        ++prefix_d;
      }
      // Discharging may never run ahead of charging (battery below its
      // arrival level), in normalized full-power hours.
      if (prefix_d * dt > prefix_c * dt + kAlignTol) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    plan.t_charge_h = nc * dt;
    plan.t_discharge_h = nd * dt;
    // Total discharge within the allowance.
    if (plan.t_discharge_h > r.t_discharge_allow_h + kAlignTol) continue;
    // Energy balance: charging covers the request plus battery losses.
    const double need_h = r.t_charge_req_h + (r.p_discharge_max_kw / r.p_charge_max_kw) *
                                                 plan.t_discharge_h / r.efficiency;
    if (std::abs(plan.t_charge_h - need_h) > kAlignTol) continue;
    plans.push_back(std::move(plan));
  }
  return plans;
}

}  // namespace

OracleResult oracle_enumerate_detail(const MicroScenario& ms) {
  if (ms.grid.steps > kMaxSteps)
    throw TooLarge("micro scenario exceeds " + std::to_string(kMaxSteps) + " steps");
  if (ms.buildings.size() > kMaxBuildings)
    throw TooLarge("micro scenario exceeds 2 buildings");
  if (ms.evs.size() != ms.buildings.size())
    throw TooLarge("per-building EV lists must match the building list");
  for (const auto& list : ms.evs)
    if (list.size() > 1) throw TooLarge("micro scenario allows at most 1 EV per building");
  check_book(ms.grid, ms.book);
  for (const BuildingSeries& b : ms.buildings) check_series(ms.grid, b);

  const int steps = ms.grid.steps;
  const double dt = ms.grid.dt_hours;
  const int n_b = static_cast<int>(ms.buildings.size());

  // Per building: the validated request (or none) and its feasible plans.
  std::vector<const EVRequest*> req(static_cast<std::size_t>(n_b), nullptr);
  std::vector<std::vector<EvPlan>> plans(static_cast<std::size_t>(n_b));
  std::vector<EVRequest> validated;
  validated.reserve(static_cast<std::size_t>(n_b));
  for (int b = 0; b < n_b; ++b) {
    if (ms.evs[b].empty()) {
      plans[b] = {EvPlan{}};  // single empty plan
      continue;
    }
    validated.push_back(validate_request(ms.evs[b][0], ms.grid));
    req[b] = &validated.back();
    plans[b] = enumerate_plans(*req[b], dt);
    if (plans[b].empty())
      throw InfeasibleRequest("micro scenario EV " + req[b]->id +
                              " admits no feasible full-power schedule");
  }

  const double c_eg = ms.book.grid_export_comp_eur_kwh;
  const double c_ec = ms.community ? ms.community->export_comp_eur_kwh : 0.0;
  const double c_ic = ms.community ? ms.community->import_price_eur_kwh : 0.0;

  // Cost of one combined choice of plans.
  auto evaluate = [&](const std::vector<const EvPlan*>& chosen) {
    double total = 0.0;
    // EV service revenue, subtracted from the objective.
    for (int b = 0; b < n_b; ++b) {
      if (!req[b]) continue;
      const EvPlan& p = *chosen[b];
      double charging_fees = 0.0;
      for (int k = 0; k < static_cast<int>(p.action.size()); ++k)
        if (p.action[static_cast<std::size_t>(k)] == 1)
          charging_fees += dt * ms.book.charging_eur_h[req[b]->arrival_step + k];
      const double c_ev =
          req[b]->t_park_h * ms.book.parking_eur_h -
          (req[b]->t_park_h - p.t_charge_h - p.t_discharge_h) *
              ms.book.flexibility_eur_h +
          charging_fees - p.t_discharge_h * ms.book.discharging_eur_h;
      total -= c_ev;
    }
    // Electricity, step by step.
    for (int h = 0; h < steps; ++h) {
      double deficit = 0.0, surplus = 0.0;
      for (int b = 0; b < n_b; ++b) {
        double v = ms.buildings[b].net_load_kw[h];
        if (req[b]) {
          const int k = h - req[b]->arrival_step;
          if (k >= 0 && k < static_cast<int>(chosen[b]->action.size())) {
            const int a = chosen[b]->action[static_cast<std::size_t>(k)];
            if (a == 1) v += req[b]->p_charge_max_kw;
            if (a == 2) v -= req[b]->p_discharge_max_kw;
          }
        }
        if (v >= 0) deficit += v;
        else surplus -= v;
      }
      const double c_ig = ms.book.grid_import_eur_kwh[h];
      const double no_trade = dt * (deficit * c_ig - surplus * c_eg);
      if (ms.community) {
        const double q = std::min(surplus, deficit);
        const double traded = dt * ((deficit - q) * c_ig - (surplus - q) * c_eg +
                                    q * c_ic - q * c_ec);
        total += std::min(no_trade, traded);
      } else {
        total += no_trade;
      }
    }
    return total;
  };

  OracleResult best;
  best.objective = kInf;
  std::vector<const EvPlan*> chosen(static_cast<std::size_t>(n_b), nullptr);
  std::vector<double> values;
  // Cartesian product over the (at most two) plan lists.
  for (const EvPlan& p0 : plans[0]) {
    chosen[0] = &p0;
    if (n_b == 1) {
      values.push_back(evaluate(chosen));
      continue;
    }
    for (const EvPlan& p1 : plans[1]) {
      chosen[1] = &p1;
      values.push_back(evaluate(chosen));
    }
  }
  for (double v : values) best.objective = std::min(best.objective, v);
  for (double v : values)
    if (std::abs(v - best.objective) <= 1e-9) ++best.optima;
  return best;
}

double oracle_enumerate(const MicroScenario& ms) {
  return oracle_enumerate_detail(ms).objective;
}

double micro_milp_objective(const MicroScenario& ms) {
  ScheduleModelBuilder builder(ms.grid, ms.book);
  if (ms.community) builder.enable_community(*ms.community);
  for (std::size_t b = 0; b < ms.buildings.size(); ++b)
    builder.add_building(ms.buildings[b], ms.evs[b]);
  BuiltModel built = builder.build();
  SolveOptions opts;
  opts.rel_gap = 1e-9;
  const SolveResult res = branch_and_bound(built.mip, opts);
  if (res.status != SolveStatus::optimal)
    throw DomainError("micro scenario '" + ms.id + "' did not solve to optimality");
  return extract_solution(built, res).objective_eur;
}

// ---------------------------------------------------------------------------
// The fixed battery

namespace {

Eigen::VectorXd flat(int n, double v) {
  return Eigen::VectorXd::Constant(n, v);
}

Eigen::VectorXd series(std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

// Flat reference book: import 0.10 EUR/kWh, export 0.04, community fee 0.01,
// parking 0.5 EUR/h, flexibility 0.5, discharging 3, charging fee 2 EUR/h.
TariffBook book_flat(int steps) {
  TariffBook book;
  book.grid_import_eur_kwh = flat(steps, 0.10);
  book.grid_export_comp_eur_kwh = 0.04;
  book.grid_use_fee_eur_kwh = 0.01;
  book.parking_eur_h = 0.5;
  book.flexibility_eur_h = 0.5;
  book.discharging_eur_h = 3.0;
  book.charging_eur_h = flat(steps, 2.0);
  return book;
}

EVRequest ev(const std::string& id, int arrival, int departure, double dt,
             double t_charge, double t_discharge, double efficiency = 1.0,
             double p_charge = 10.0, double p_discharge = 10.0) {
  EVRequest r;
  r.id = id;
  r.arrival_step = arrival;
  r.departure_step = departure;
  r.t_park_h = (departure - arrival) * dt;
  r.t_charge_req_h = t_charge;
  r.t_discharge_allow_h = t_discharge;
  r.p_charge_max_kw = p_charge;
  r.p_discharge_max_kw = p_discharge;
  r.efficiency = efficiency;
  return r;
}

MicroScenario micro(const std::string& id, const TimeGrid& grid, TariffBook book,
                    bool community, std::vector<BuildingSeries> buildings,
                    std::vector<std::vector<EVRequest>> evs) {
  MicroScenario ms;
  ms.id = id;
  ms.grid = grid;
  ms.book = std::move(book);
  if (community) ms.community = derive_community_tariffs(ms.book);
  ms.buildings = std::move(buildings);
  ms.evs = std::move(evs);
  return ms;
}

}  // namespace

std::vector<MicroScenario> oracle_battery() {
  std::vector<MicroScenario> out;
  const TimeGrid g8(8.0, 8, 0.25);  // 8-10 h, quarter-hour steps

  // 1: pure consumer, no EVs: closed-form grid cost.
  out.push_back(micro("m01-baseline-flat", g8, book_flat(8), false,
                      {{"b1", flat(8, 10.0)}}, {{}}));

  // 2: mixed import/export, no EVs.
  out.push_back(micro("m02-baseline-surplus", g8, book_flat(8), false,
                      {{"b1", series({10, 10, -10, -10, -20, 10, 10, 10})}}, {{}}));

  // 3: flat tariffs make charge placement indifferent (many optima).
  out.push_back(micro("m03-charge-flat", g8, book_flat(8), false,
                      {{"b1", flat(8, 10.0)}},
                      {{ev("n1", 0, 8, 0.25, 0.5, 0.0)}}));

  // 4: price ramp concentrates charging on the cheap steps.
  {
    TariffBook b = book_flat(8);
    b.grid_import_eur_kwh = series({0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40});
    b.charging_eur_h = build_charging_tariff(b.grid_import_eur_kwh, 2.0);
    out.push_back(micro("m04-charge-ramp", g8, b, false, {{"b1", flat(8, 10.0)}},
                        {{ev("n1", 0, 8, 0.25, 0.5, 0.0)}}));
  }

  // 5-7: V2B against a late price spike.
  {
    TariffBook b = book_flat(8);
    b.grid_import_eur_kwh = series({0.10, 0.10, 0.10, 0.10, 0.60, 0.60, 0.10, 0.10});
    b.discharging_eur_h = 1.0;
    out.push_back(micro("m05-v2b-profitable", g8, b, false, {{"b1", flat(8, 20.0)}},
                        {{ev("n1", 0, 8, 0.25, 0.5, 0.5)}}));
    TariffBook b6 = b;
    b6.discharging_eur_h = 5.0;
    out.push_back(micro("m06-v2b-unprofitable", g8, b6, false,
                        {{"b1", flat(8, 20.0)}}, {{ev("n1", 0, 8, 0.25, 0.5, 0.5)}}));
    out.push_back(micro("m07-v2b-eta-half", g8, b, false, {{"b1", flat(8, 20.0)}},
                        {{ev("n1", 0, 8, 0.25, 0.5, 0.25, 0.5)}}));
  }

  // 8: plain community surplus/deficit matching, no EVs.
  out.push_back(micro("m08-community-match", g8, book_flat(8), true,
                      {{"b1", flat(8, 20.0)},
                       {"b2", series({10, 10, -20, -20, -20, 10, 10, 10})}},
                      {{}, {}}));

  // 9: community fee above the grid spread: trading never pays.
  {
    TariffBook b = book_flat(8);
    b.grid_use_fee_eur_kwh = 0.08;  // import price 0.12 > grid's 0.10
    out.push_back(micro("m09-community-dominated", g8, b, true,
                        {{"b1", flat(8, 20.0)},
                         {"b2", series({10, 10, -20, -20, -20, 10, 10, 10})}},
                        {{}, {}}));
  }

  // 10: EV charging shifted into the neighbour's surplus window.
  out.push_back(micro("m10-community-ev-shift", g8, book_flat(8), true,
                      {{"b1", flat(8, 20.0)},
                       {"b2", series({0, 0, -20, -20, 0, 0, 0, 0})}},
                      {{ev("n1", 0, 8, 0.25, 1.0, 0.0)}, {}}));

  // 11: V2B and community trading interacting.
  {
    TariffBook b = book_flat(8);
    b.grid_import_eur_kwh = series({0.10, 0.10, 0.10, 0.10, 0.60, 0.60, 0.10, 0.10});
    b.discharging_eur_h = 1.0;
    out.push_back(micro("m11-community-v2b", g8, b, true,
                        {{"b1", flat(8, 20.0)},
                         {"b2", series({0, -20, -20, 0, 0, 0, 0, 0})}},
                        {{ev("n1", 0, 8, 0.25, 0.5, 0.5)}, {}}));
  }

  // 12: zero-load neighbour cannot trade; charging falls back to the grid.
  out.push_back(micro("m12-zero-imbalance", g8, book_flat(8), true,
                      {{"b1", flat(8, 0.0)}, {"b2", flat(8, 0.0)}},
                      {{ev("n1", 0, 8, 0.25, 0.5, 0.0)}, {}}));

  // 13: window exactly as long as the request: unique schedule.
  out.push_back(micro("m13-window-tight", g8, book_flat(8), false,
                      {{"b1", flat(8, 10.0)}},
                      {{ev("n1", 2, 6, 0.25, 1.0, 0.0)}}));

  // 14: early price spike is unreachable for discharge (prefix rule).
  {
    TariffBook b = book_flat(8);
    b.grid_import_eur_kwh = series({0.60, 0.60, 0.10, 0.10, 0.10, 0.10, 0.10, 0.10});
    b.discharging_eur_h = 1.0;
    out.push_back(micro("m14-discharge-prefix", g8, b, false,
                        {{"b1", flat(8, 20.0)}}, {{ev("n1", 0, 8, 0.25, 0.5, 0.5)}}));
  }

  // 15: charging inside the building's own surplus beats later imports.
  out.push_back(micro("m15-exporter-ev", g8, book_flat(8), false,
                      {{"b1", series({-20, -20, -20, -20, 10, 10, 10, 10})}},
                      {{ev("n1", 0, 8, 0.25, 0.5, 0.0)}}));

  // 16: one EV per building, both directions of trade used.
  out.push_back(micro("m16-two-evs", g8, book_flat(8), true,
                      {{"b1", flat(8, 20.0)},
                       {"b2", series({-10, -10, 0, 0, 0, 0, 10, 10})}},
                      {{ev("n1", 0, 8, 0.25, 0.5, 0.0)},
                       {ev("n2", 0, 8, 0.25, 0.5, 0.25)}}));

  // 17: coarser half-hour grid.
  {
    const TimeGrid g(8.0, 8, 0.5);
    out.push_back(micro("m17-dt-half", g, book_flat(8), false,
                        {{"b1", series({10, 10, -10, -10, 10, 10, 10, 10})}},
                        {{ev("n1", 0, 8, 0.5, 1.0, 0.0)}}));
  }

  // 18: free charging: placement indifferent under flat import prices.
  {
    TariffBook b = book_flat(8);
    b.charging_eur_h = flat(8, 0.0);
    out.push_back(micro("m18-free-charging", g8, b, false, {{"b1", flat(8, 10.0)}},
                        {{ev("n1", 0, 8, 0.25, 0.5, 0.0)}}));
  }

  // 19: flexibility reward above the charging fee.
  {
    TariffBook b = book_flat(8);
    b.flexibility_eur_h = 3.0;
    out.push_back(micro("m19-flex-heavy", g8, b, false, {{"b1", flat(8, 10.0)}},
                        {{ev("n1", 0, 8, 0.25, 0.5, 0.0)}}));
  }

  // 20: one step where export compensation beats the import price (the grid
  // pair needs its own gating binary there).
  {
    TariffBook b = book_flat(8);
    b.grid_import_eur_kwh = series({0.10, 0.10, 0.10, 0.10, 0.10, 0.03, 0.10, 0.10});
    b.charging_eur_h = build_charging_tariff(b.grid_import_eur_kwh, 2.0);
    out.push_back(micro("m20-grid-split", g8, b, false,
                        {{"b1", series({10, 10, 10, 10, 10, -10, 10, 10})}},
                        {{ev("n1", 0, 8, 0.25, 0.5, 0.0)}}));
  }

  // 21: every step trades the full 10 kW surplus.
  out.push_back(micro("m21-community-steady", g8, book_flat(8), true,
                      {{"b1", flat(8, 30.0)}, {"b2", flat(8, -10.0)}},
                      {{}, {ev("n1", 0, 8, 0.25, 0.5, 0.0)}}));

  // 22: all-deficit community: binaries are forced, relaxation integral.
  out.push_back(micro("m22-all-deficit", g8, book_flat(8), true,
                      {{"b1", flat(8, 20.0)}, {"b2", flat(8, 10.0)}},
                      {{ev("n1", 0, 8, 0.25, 0.5, 0.0)}, {}}));

  return out;
}

std::vector<OracleCheck> run_oracle_suite() {
  std::vector<OracleCheck> checks;
  for (const MicroScenario& ms : oracle_battery()) {
    OracleCheck c;
    c.id = ms.id;
    c.oracle = oracle_enumerate(ms);
    c.milp = micro_milp_objective(ms);
    c.pass = std::abs(c.milp - c.oracle) <= 1e-6 * std::max(1.0, std::abs(c.oracle));
    checks.push_back(std::move(c));
  }
  return checks;
}

}  // namespace flexcomm
