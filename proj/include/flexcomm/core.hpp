#pragma once

// Core domain types for the community EV scheduling toolkit: the daily time
// grid, building net-load series, and EV charging/discharging requests.

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace flexcomm {

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numeric argument is outside its documented domain.
struct DomainError : Error {
  using Error::Error;
};

// A series length does not match the time grid.
struct DimensionMismatch : Error {
  using Error::Error;
};

// A requested charging/discharging period is negative.
struct NegativePeriod : Error {
  using Error::Error;
};

// An EV parking window lies (partly) outside the time grid.
struct WindowOutOfRange : Error {
  using Error::Error;
};

// The stored parking period disagrees with the arrival/departure steps.
struct ParkPeriodMismatch : Error {
  using Error::Error;
};

// The requested periods cannot fit in the parking window at maximum power.
struct InfeasibleRequest : Error {
  using Error::Error;
};

// A file could not be opened, read or written.
struct IoError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Time grid

// Uniform discretisation of (at most) one day. `start_hour` is the wall-clock
// hour of step 0; step i covers [start_hour + i*dt, start_hour + (i+1)*dt).
struct TimeGrid {
  double start_hour = 0.0;
  int steps = 96;
  double dt_hours = 0.25;

  TimeGrid() = default;
  TimeGrid(double start, int n, double dt);

  double hour_at(int step) const { return start_hour + step * dt_hours; }
  double mid_hour(int step) const { return start_hour + (step + 0.5) * dt_hours; }
  double span_hours() const { return steps * dt_hours; }
};

// Snap an hour-valued period onto the grid resolution, rounding half up.
double snap_period(double hours, double dt_hours);

// ---------------------------------------------------------------------------
// Buildings

// One building's net load (demand minus on-site generation) per step, kW.
// Positive values are a deficit (import need), negative values a surplus.
struct BuildingSeries {
  std::string id;
  Eigen::VectorXd net_load_kw;
};

// Throws DimensionMismatch unless the series has exactly grid.steps entries.
void check_series(const TimeGrid& grid, const BuildingSeries& b);

// ---------------------------------------------------------------------------
// EV requests

// A user's declaration for one parked EV: the parking window (as grid step
// indices), the requested charging period, the allowed discharging period
// (both in hours at maximum power), charger limits, and battery efficiency.
struct EVRequest {
  std::string id;
  int arrival_step = 0;
  int departure_step = 0;
  double t_park_h = 0.0;
  double t_charge_req_h = 0.0;
  double t_discharge_allow_h = 0.0;
  double p_charge_max_kw = 0.0;
  double p_discharge_max_kw = 0.0;
  double efficiency = 1.0;

  // A request with no charging period parks without charge/discharge service.
  bool parking_only() const { return t_charge_req_h <= 0.0; }
  int window_steps() const { return departure_step - arrival_step; }
};

// Validates a request against the grid and returns the normalised copy:
// requested periods snapped onto the grid resolution (round half up) and all
// invariants checked. Throws NegativePeriod, WindowOutOfRange,
// ParkPeriodMismatch, DomainError or InfeasibleRequest.
//
// Feasibility rule: charging the requested period plus discharging the full
// allowance plus recharging the discharged energy must fit the window at
// maximum power, i.e. t_charge + t_discharge * (1 + 1/efficiency) <= t_park.
EVRequest validate_request(const EVRequest& req, const TimeGrid& grid);

// Converts a power level held for one step into max-power-equivalent hours:
// power * dt / p_max. Throws DomainError if power is outside [0, p_max] or
// p_max <= 0.
double used_period(double power_kw, double p_max_kw, double dt_hours);

}  // namespace flexcomm
