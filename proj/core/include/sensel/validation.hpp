#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

#include "sensel/scenario.hpp"

namespace sensel {

struct ValidationConfig {
  int trials = 1000;
  int gauss_newton_iterations = 10;
  std::uint64_t seed = 0;
};

/// Positions of the sensors with w_m > 0.5, in index order.
std::vector<Vector> selected_positions(const Scenario& scenario, const Selection& w);

/// Range measurements y_m = d_m + n_m, n_m ~ N(0, sigma2 d_m^eta), for the
/// selected sensors in index order. Range model only (ConfigError otherwise).
Vector simulate_ranges(const Scenario& scenario, const Selection& w, const Vector& theta,
                       std::mt19937_64& rng);
Vector simulate_ranges(const Scenario& scenario, const Selection& w, const Vector& theta,
                       std::uint64_t seed);

/// Fixed number of Gauss-Newton steps on sum_m (y_m - ||theta - a_m||)^2.
/// Throws GeometryError when J^T J is singular or an iterate hits a sensor.
Vector gauss_newton_localize(const Vector& measurements, const std::vector<Vector>& sensors,
                             const Vector& theta_init, int iterations);

struct CrbStats {
  double max_root_crb = 0.0;
  double mean_root_crb = 0.0;
  /// sqrt(tr F(w, theta_d)^-1) per grid point.
  Vector per_point;
};

/// Throws InfeasibleError carrying d when F(w, theta_d) is singular.
CrbStats crb_stats(const FimAtomSet& atoms, const Selection& w,
                   const std::optional<Matrix>& prior = std::nullopt);

struct ValidationPoint {
  Vector theta;
  double root_crb = 0.0;
  double rmse = 0.0;
  /// Standard error of the RMSE estimate (delta method).
  double rmse_se = 0.0;
  int trials = 0;
};

/// Per grid point: simulate `trials` measurement sets, localize each from
/// the centroid of the grid and compare the RMSE with the
/// root-CRB. Trial t at point d draws from a stream keyed by (seed, d, t).
std::vector<ValidationPoint> monte_carlo_validate(const Scenario& scenario, const Selection& w,
                                                  const ValidationConfig& config);

/// CSV with header theta_x,theta_y,root_crb,rmse,trials.
void write_validation_csv(std::ostream& out, const std::vector<ValidationPoint>& points);

}  // namespace sensel
