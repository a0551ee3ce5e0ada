#include "flexcomm/core.hpp"

#include <cmath>

namespace flexcomm {

namespace {
constexpr double kPeriodTol = 1e-9;  // slack for hour arithmetic on the grid
}

TimeGrid::TimeGrid(double start, int n, double dt)
    : start_hour(start), steps(n), dt_hours(dt) {
  if (!(dt > 0.0)) throw DomainError("TimeGrid: dt must be positive");
  if (steps < 1) throw DomainError("TimeGrid: need at least one step");
  if (steps * dt > 24.0 + kPeriodTol)
    throw DomainError("TimeGrid: horizon exceeds one day");
  if (start < 0.0 || start >= 24.0)
    throw DomainError("TimeGrid: start hour outside [0, 24)");
}

double snap_period(double hours, double dt_hours) {
  if (!(dt_hours > 0.0)) throw DomainError("snap_period: dt must be positive");
  return std::floor(hours / dt_hours + 0.5) * dt_hours;
}

void check_series(const TimeGrid& grid, const BuildingSeries& b) {
  if (b.net_load_kw.size() != grid.steps)
    throw DimensionMismatch("building '" + b.id + "': series has " +
                            std::to_string(b.net_load_kw.size()) +
                            " entries, grid has " + std::to_string(grid.steps));
  if (!b.net_load_kw.allFinite())
    throw DomainError("building '" + b.id + "': net load has non-finite values");
}

EVRequest validate_request(const EVRequest& req, const TimeGrid& grid) {
  if (req.arrival_step < 0 || req.departure_step > grid.steps)
    throw WindowOutOfRange("EV '" + req.id + "': window outside the grid");
  if (req.departure_step <= req.arrival_step)
    throw WindowOutOfRange("EV '" + req.id + "': departure not after arrival");
  const double window_h = req.window_steps() * grid.dt_hours;
  if (std::abs(req.t_park_h - window_h) > kPeriodTol)
    throw ParkPeriodMismatch("EV '" + req.id + "': t_park " +
                             std::to_string(req.t_park_h) +
                             " h does not match the step window");
  if (req.t_charge_req_h < 0.0 || req.t_discharge_allow_h < 0.0)
    throw NegativePeriod("EV '" + req.id + "': requested period is negative");
  if (!(req.p_charge_max_kw > 0.0))
    throw DomainError("EV '" + req.id + "': p_charge_max must be positive");
  if (req.p_discharge_max_kw < 0.0)
    throw DomainError("EV '" + req.id + "': p_discharge_max is negative");
  if (!(req.efficiency > 0.0) || req.efficiency > 1.0)
    throw DomainError("EV '" + req.id + "': efficiency outside (0, 1]");

  EVRequest out = req;
  out.t_park_h = window_h;
  out.t_charge_req_h = snap_period(req.t_charge_req_h, grid.dt_hours);
  out.t_discharge_allow_h = snap_period(req.t_discharge_allow_h, grid.dt_hours);

  if (out.parking_only()) {
    if (out.t_discharge_allow_h > 0.0)
      throw InfeasibleRequest("EV '" + req.id +
                              "': discharging requires a charging request");
    return out;
  }
  if (out.t_discharge_allow_h > 0.0 && !(out.p_discharge_max_kw > 0.0))
    throw InfeasibleRequest("EV '" + req.id +
                            "': discharge allowed but charger cannot discharge");
  const double needed =
      out.t_charge_req_h + out.t_discharge_allow_h * (1.0 + 1.0 / out.efficiency);
  if (needed > out.t_park_h + kPeriodTol)
    throw InfeasibleRequest("EV '" + req.id + "': needs " +
                            std::to_string(needed) + " h at full power but parks " +
                            std::to_string(out.t_park_h) + " h");
  return out;
}

double used_period(double power_kw, double p_max_kw, double dt_hours) {
  if (!(p_max_kw > 0.0)) throw DomainError("used_period: p_max must be positive");
  if (!(dt_hours > 0.0)) throw DomainError("used_period: dt must be positive");
  if (power_kw < -1e-12 || power_kw > p_max_kw * (1.0 + 1e-12) + 1e-12)
    throw DomainError("used_period: power outside [0, p_max]");
  const double t = power_kw * dt_hours / p_max_kw;
  return std::clamp(t, 0.0, dt_hours);
}

}  // namespace flexcomm
