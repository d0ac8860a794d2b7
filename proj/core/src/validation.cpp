#include "sensel/validation.hpp"

#include <cmath>
#include <iomanip>
#include <string>

#include <Eigen/Cholesky>

#include "sensel/errors.hpp"
#include "sensel/random.hpp"

namespace sensel {

namespace {

const RangeModel& range_model(const Scenario& scenario) {
  const auto* model = std::get_if<RangeModel>(&scenario.model);
  if (!model) {
    throw ConfigError("estimator validation supports the range model only, got " +
                      std::string(model_name(scenario.model)));
  }
  return *model;
}

}  // namespace

std::vector<Vector> selected_positions(const Scenario& scenario, const Selection& w) {
  if (static_cast<std::size_t>(w.size()) != scenario.sensors.size()) {
    throw ConfigError("selection size does not match the number of sensors");
  }
  std::vector<Vector> out;
  for (Eigen::Index m = 0; m < w.size(); ++m) {
    if (w[m] > 0.5) out.push_back(scenario.sensors[static_cast<std::size_t>(m)]);
  }
  return out;
}

Vector simulate_ranges(const Scenario& scenario, const Selection& w, const Vector& theta,
                       std::mt19937_64& rng) {
  const RangeModel& model = range_model(scenario);
  const std::vector<Vector> sensors = selected_positions(scenario, w);
  std::normal_distribution<double> normal;
  Vector y(static_cast<Eigen::Index>(sensors.size()));
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const double d = (theta - sensors[i]).norm();
    const double variance = model.sigma2 * std::pow(d, model.eta);
    y[static_cast<Eigen::Index>(i)] = d + std::sqrt(variance) * normal(rng);
  }
  return y;
}

Vector simulate_ranges(const Scenario& scenario, const Selection& w, const Vector& theta,
                       std::uint64_t seed) {
  auto rng = make_stream({seed});
  return simulate_ranges(scenario, w, theta, rng);
}

Vector gauss_newton_localize(const Vector& measurements, const std::vector<Vector>& sensors,
                             const Vector& theta_init, int iterations) {
  if (static_cast<std::size_t>(measurements.size()) != sensors.size()) {
    throw ConfigError("one measurement per selected sensor is required");
  }
  const Eigen::Index n = theta_init.size();
  if (sensors.size() < static_cast<std::size_t>(n)) {
    throw GeometryError("Gauss-Newton needs at least " + std::to_string(n) + " sensors", theta_init);
  }
  Vector theta = theta_init;
  const auto rows = static_cast<Eigen::Index>(sensors.size());
  for (int it = 0; it < iterations; ++it) {
    Matrix jac(rows, n);
    Vector residual(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const Vector diff = theta - sensors[static_cast<std::size_t>(i)];
      const double d = diff.norm();
      if (d == 0.0) throw GeometryError("Gauss-Newton iterate coincides with a sensor", theta);
      jac.row(i) = diff.transpose() / d;
      residual[i] = measurements[i] - d;
    }
    const Matrix normal = jac.transpose() * jac;
    Eigen::LLT<Matrix> llt(normal);
    const double scale = normal.diagonal().maxCoeff();
    bool singular = llt.info() != Eigen::Success;
    if (!singular) {
      const Vector pivots = llt.matrixL().toDenseMatrix().diagonal();
      singular = !(pivots.cwiseAbs2().minCoeff() > 1e-12 * scale);
    }
    if (singular) throw GeometryError("rank-deficient Gauss-Newton normal equations", theta);
    theta += llt.solve(jac.transpose() * residual);
  }
  return theta;
}

CrbStats crb_stats(const FimAtomSet& atoms, const Selection& w, const std::optional<Matrix>& prior) {
  if (static_cast<std::size_t>(w.size()) != atoms.sensors()) {
    throw ConfigError("selection size does not match the number of sensors");
  }
  CrbStats stats;
  stats.per_point.resize(static_cast<Eigen::Index>(atoms.points()));
  for (std::size_t d = 0; d < atoms.points(); ++d) {
    const Matrix f = atoms.weighted_sum(w, d, prior ? &*prior : nullptr);
    Eigen::LLT<Matrix> llt(f);
    bool singular = llt.info() != Eigen::Success;
    if (!singular) {
      const Vector pivots = llt.matrixL().toDenseMatrix().diagonal();
      singular = !(pivots.cwiseAbs2().minCoeff() > 1e-14 * f.diagonal().maxCoeff());
    }
    if (singular) {
      throw InfeasibleError("information matrix is singular at grid point " + std::to_string(d), d);
    }
    const double tr = llt.solve(Matrix::Identity(f.rows(), f.cols())).trace();
    stats.per_point[static_cast<Eigen::Index>(d)] = std::sqrt(tr);
  }
  stats.max_root_crb = stats.per_point.maxCoeff();
  stats.mean_root_crb = stats.per_point.mean();
  return stats;
}

std::vector<ValidationPoint> monte_carlo_validate(const Scenario& scenario, const Selection& w,
                                                  const ValidationConfig& config) {
  range_model(scenario);
  if (config.trials < 1) throw ConfigError("validation needs at least one trial");
  if (config.gauss_newton_iterations < 1) {
    throw ConfigError("validation needs at least one Gauss-Newton iteration");
  }
  const FimAtomSet atoms = assemble_atoms(scenario);
  const CrbStats crb = crb_stats(atoms, w);
  const std::vector<Vector> sensors = selected_positions(scenario, w);
  Vector start = Vector::Zero(scenario.dim);
  for (const Vector& p : scenario.grid.points) start += p;
  start /= static_cast<double>(scenario.grid.size());

  std::vector<ValidationPoint> out;
  out.reserve(scenario.grid.size());
  for (std::size_t d = 0; d < scenario.grid.size(); ++d) {
    const Vector& theta = scenario.grid.points[d];
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int t = 0; t < config.trials; ++t) {
      auto rng = make_stream({config.seed, static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(t)});
      const Vector y = simulate_ranges(scenario, w, theta, rng);
      const Vector estimate =
          gauss_newton_localize(y, sensors, start, config.gauss_newton_iterations);
      const double err = (estimate - theta).squaredNorm();
      sum += err;
      sum_sq += err * err;
    }
    const double trials = config.trials;
    const double mse = sum / trials;
    const double var = std::max(0.0, sum_sq / trials - mse * mse);
    ValidationPoint point;
    point.theta = theta;
    point.root_crb = crb.per_point[static_cast<Eigen::Index>(d)];
    point.rmse = std::sqrt(mse);
    const double mse_se = std::sqrt(var / trials);
    point.rmse_se = point.rmse > 0.0 ? mse_se / (2.0 * point.rmse) : 0.0;
    point.trials = config.trials;
    out.push_back(std::move(point));
  }
  return out;
}

void write_validation_csv(std::ostream& out, const std::vector<ValidationPoint>& points) {
  out << "theta_x,theta_y,root_crb,rmse,trials\n";
  out << std::setprecision(17);
  for (const ValidationPoint& p : points) {
    out << p.theta[0] << ',' << (p.theta.size() > 1 ? p.theta[1] : 0.0) << ',' << p.root_crb << ','
        << p.rmse << ',' << p.trials << '\n';
  }
}

}  // namespace sensel
