#include "flexcomm/tariffs.hpp"

#include <cmath>

namespace flexcomm {

Eigen::VectorXd build_grid_import(const Eigen::VectorXd& wholesale_eur_mwh,
                                  double target_avg_eur_mwh) {
  if (wholesale_eur_mwh.size() == 0)
    throw ZeroMeanWholesale("grid import: empty wholesale profile");
  const double mean = wholesale_eur_mwh.mean();
  if (!(mean > 1e-12))
    throw ZeroMeanWholesale("grid import: wholesale mean is not positive");
  if (!(target_avg_eur_mwh > 0.0))
    throw DomainError("grid import: target average must be positive");
  return wholesale_eur_mwh * (target_avg_eur_mwh / mean / 1000.0);
}

double build_grid_export(double monthly_avg_eur_mwh) {
  if (!(monthly_avg_eur_mwh > 0.0))
    throw NonPositiveInput("grid export: monthly average must be positive");
  return 0.9 * monthly_avg_eur_mwh / 1000.0;
}

Eigen::VectorXd build_charging_tariff(const Eigen::VectorXd& grid_import_eur_kwh,
                                      double target_avg_eur_h) {
  if (grid_import_eur_kwh.size() == 0)
    throw ZeroMeanInput("charging tariff: empty grid import series");
  const double mean = grid_import_eur_kwh.mean();
  if (!(mean > 1e-15))
    throw ZeroMeanInput("charging tariff: grid import mean is not positive");
  if (target_avg_eur_h < 0.0)
    throw DomainError("charging tariff: target average is negative");
  return grid_import_eur_kwh * (target_avg_eur_h / mean);
}

CommunityTariffs derive_community_tariffs(const TariffBook& book) {
  CommunityTariffs ct;
  ct.export_comp_eur_kwh = book.grid_export_comp_eur_kwh;
  ct.import_price_eur_kwh = ct.export_comp_eur_kwh + book.grid_use_fee_eur_kwh;
  const double max_import = book.grid_import_eur_kwh.size() > 0
                                ? book.grid_import_eur_kwh.maxCoeff()
                                : 0.0;
  ct.grid_dominated = ct.import_price_eur_kwh > max_import;
  return ct;
}

void check_book(const TimeGrid& grid, const TariffBook& book) {
  if (book.grid_import_eur_kwh.size() != grid.steps ||
      book.charging_eur_h.size() != grid.steps)
    throw DimensionMismatch("tariff book: series length does not match grid");
  if ((book.grid_import_eur_kwh.array() <= 0.0).any())
    throw DomainError("tariff book: grid import price must be positive");
  if ((book.charging_eur_h.array() < 0.0).any())
    throw DomainError("tariff book: charging tariff is negative");
  if (book.grid_export_comp_eur_kwh < 0.0 || book.grid_use_fee_eur_kwh < 0.0 ||
      book.parking_eur_h < 0.0 || book.flexibility_eur_h < 0.0 ||
      book.discharging_eur_h < 0.0)
    throw DomainError("tariff book: magnitudes must be non-negative");
}

Eigen::VectorXd default_wholesale_shape(const TimeGrid& grid) {
  auto bump = [](double h, double mu, double sigma) {
    const double z = (h - mu) / sigma;
    return std::exp(-0.5 * z * z);
  };
  Eigen::VectorXd s(grid.steps);
  for (int i = 0; i < grid.steps; ++i) {
    const double h = grid.mid_hour(i);
    s[i] = 0.78 + 0.34 * bump(h, 9.0, 2.2) + 0.42 * bump(h, 19.5, 2.6) -
           0.10 * bump(h, 14.0, 2.0);
  }
  return s / s.mean();
}

}  // namespace flexcomm
