#pragma once

// Tariff construction: grid energy prices shaped from wholesale data, EV
// service tariffs, and the derived community trading prices.
//
// Conventions: energy prices are stored in EUR/kWh, EV service tariffs in
// EUR/h of max-power-equivalent use. All stored values are magnitudes
// (non-negative); whether an amount is paid or received is decided by the
// cost assembly, not by its sign here.

#include <Eigen/Dense>

#include "flexcomm/core.hpp"

namespace flexcomm {

// Wholesale input has a non-positive or vanishing mean.
struct ZeroMeanWholesale : Error {
  using Error::Error;
};

// A scalar tariff input that must be positive is not.
struct NonPositiveInput : Error {
  using Error::Error;
};

// A series input whose mean must be positive has a vanishing mean.
struct ZeroMeanInput : Error {
  using Error::Error;
};

// All tariffs a community run needs.
struct TariffBook {
  Eigen::VectorXd grid_import_eur_kwh;   // per step, > 0
  double grid_export_comp_eur_kwh = 0.0; // flat compensation magnitude
  double grid_use_fee_eur_kwh = 0.0;     // fee for trading through the grid
  double parking_eur_h = 0.0;            // paid by the EV user per parked hour
  double flexibility_eur_h = 0.0;        // reward magnitude per unused flexible hour
  double discharging_eur_h = 0.0;        // reward magnitude per discharged hour
  Eigen::VectorXd charging_eur_h;        // paid by the EV user, per step
};

// Peer-to-peer prices for surplus traded inside the community. Both are
// magnitudes in EUR/kWh; import_price = export_comp + grid use fee always.
struct CommunityTariffs {
  double export_comp_eur_kwh = 0.0;
  double import_price_eur_kwh = 0.0;
  // Set when the community import price exceeds every grid import price, in
  // which case trading can never be attractive. Informational, not fatal.
  bool grid_dominated = false;
};

// Scales a wholesale day profile (EUR/MWh) so its mean matches
// target_avg_eur_mwh, returned in EUR/kWh. Throws ZeroMeanWholesale if the
// profile mean is not positive, DomainError if the target is not positive.
Eigen::VectorXd build_grid_import(const Eigen::VectorXd& wholesale_eur_mwh,
                                  double target_avg_eur_mwh);

// Flat grid export compensation: 90% of the monthly wholesale average,
// returned as an EUR/kWh magnitude. Throws NonPositiveInput.
double build_grid_export(double monthly_avg_eur_mwh);

// Shapes the EV charging tariff proportionally to the grid import price with
// the given mean (EUR/h). A zero target gives an all-zero series. Throws
// ZeroMeanInput if the import series mean vanishes.
Eigen::VectorXd build_charging_tariff(const Eigen::VectorXd& grid_import_eur_kwh,
                                      double target_avg_eur_h);

// Community prices from the book: export compensation equal to the grid's
// (the boundary of the attractiveness condition for producers) and import
// price equal to export compensation plus the grid use fee. Flags (not
// throws) when the grid import price beats the community price at every step.
CommunityTariffs derive_community_tariffs(const TariffBook& book);

// Checks series lengths against the grid and magnitude signs.
void check_book(const TimeGrid& grid, const TariffBook& book);

// Synthetic wholesale day profile: morning and evening peaks with a midday
// trough, normalised to mean 1 over the grid. Used when no CSV is supplied.
Eigen::VectorXd default_wholesale_shape(const TimeGrid& grid);

}  // namespace flexcomm
