#include "sensel/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sensel/errors.hpp"

namespace sensel {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool all_finite(const Vector& v) { return v.allFinite(); }

void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

std::size_t lattice_count(double extent, double resolution) {
  // Tolerance absorbs representation error when resolution divides extent.
  return static_cast<std::size_t>(std::floor(extent / resolution + 1e-9)) + 1;
}

}  // namespace

DomainGrid build_grid(const Rect& area, double resolution) {
  require(std::isfinite(resolution) && resolution > 0.0, "grid resolution must be positive");
  require(std::isfinite(area.x_min) && std::isfinite(area.x_max) && std::isfinite(area.y_min) &&
              std::isfinite(area.y_max),
          "grid area bounds must be finite");
  require(area.x_max > area.x_min && area.y_max > area.y_min, "grid area is degenerate");

  const std::size_t nx = lattice_count(area.x_max - area.x_min, resolution);
  const std::size_t ny = lattice_count(area.y_max - area.y_min, resolution);

  DomainGrid grid;
  grid.area = area;
  grid.resolution = resolution;
  grid.points.reserve(nx * ny);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      grid.points.emplace_back(Eigen::Vector2d(area.x_min + static_cast<double>(ix) * resolution,
                                               area.y_min + static_cast<double>(iy) * resolution));
    }
  }
  return grid;
}

DomainGrid grid_from_points(std::vector<Vector> points) {
  require(!points.empty(), "grid must contain at least one point");
  const auto dim = points.front().size();
  for (const auto& p : points) {
    require(p.size() == dim && dim > 0, "grid points must share a positive dimension");
    require(all_finite(p), "grid points must be finite");
  }
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto lex_less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(points[a].begin(), points[a].end(), points[b].begin(),
                                        points[b].end());
  };
  std::sort(order.begin(), order.end(), lex_less);
  for (std::size_t i = 1; i < order.size(); ++i) {
    require(points[order[i - 1]] != points[order[i]],
            "grid points must be pairwise distinct (duplicate at index " +
                std::to_string(std::max(order[i - 1], order[i])) + ")");
  }
  DomainGrid grid;
  grid.points = std::move(points);
  return grid;
}

std::string_view model_name(const ModelParams& model) {
  return std::visit(overloaded{
                        [](const RangeModel&) { return std::string_view("range"); },
                        [](const RssModel&) { return std::string_view("rss"); },
                        [](const BearingModel&) { return std::string_view("bearing"); },
                        [](const EnergyModel&) { return std::string_view("energy"); },
                        [](const LinearModel&) { return std::string_view("linear"); },
                    },
                    model);
}

bool is_localization_model(const ModelParams& model) {
  return !std::holds_alternative<LinearModel>(model);
}

void validate_model(const ModelParams& model) {
  std::visit(overloaded{
                 [](const RangeModel& m) {
                   require(positive_finite(m.sigma2), "range: sigma2 must be positive");
                   require(std::isfinite(m.eta), "range: eta must be finite");
                 },
                 [](const RssModel& m) {
                   require(positive_finite(m.sigma_db), "rss: sigma_db must be positive");
                   require(std::isfinite(m.eta), "rss: eta must be finite");
                   require(positive_finite(m.d0), "rss: d0 must be positive");
                   require(std::isfinite(m.y0), "rss: y0 must be finite");
                 },
                 [](const BearingModel& m) {
                   require(positive_finite(m.sigma2), "bearing: sigma2 must be positive");
                 },
                 [](const EnergyModel& m) {
                   require(positive_finite(m.energy), "energy: source energy must be positive");
                   require(std::isfinite(m.beta) && m.beta >= 0.0, "energy: beta must be >= 0");
                   require(positive_finite(m.sigma2), "energy: sigma2 must be positive");
                 },
                 [](const LinearModel& m) {
                   require(!m.regressors.empty(), "linear: at least one regressor required");
                   require(m.regressors.size() == m.variances.size(),
                           "linear: one variance per regressor required");
                   const auto dim = m.regressors.front().size();
                   for (std::size_t i = 0; i < m.regressors.size(); ++i) {
                     require(m.regressors[i].size() == dim && dim > 0,
                             "linear: regressors must share a positive dimension");
                     require(all_finite(m.regressors[i]), "linear: regressors must be finite");
                     require(positive_finite(m.variances[i]),
                             "linear: variances must be positive");
                   }
                 },
             },
             model);
}

std::size_t Scenario::sensor_count() const {
  if (const auto* lin = std::get_if<LinearModel>(&model)) return lin->regressors.size();
  return sensors.size();
}

void validate_scenario(const Scenario& scenario) {
  validate_model(scenario.model);
  require(scenario.dim >= 1, "parameter dimension must be positive");
  const auto n = static_cast<Eigen::Index>(scenario.dim);
  require(scenario.sensor_count() >= 1, "at least one candidate sensor required");

  if (is_localization_model(scenario.model)) {
    require(scenario.dim == 2, std::string(model_name(scenario.model)) +
                                   " model requires a two-dimensional parameter");
  } else {
    const auto& lin = std::get<LinearModel>(scenario.model);
    require(lin.regressors.front().size() == n, "linear: regressor dimension must equal dim");
    require(scenario.sensors.empty() || scenario.sensors.size() == lin.regressors.size(),
            "linear: sensor positions, when given, must match the regressor count");
  }
  for (const auto& a : scenario.sensors) {
    require(all_finite(a), "sensor positions must be finite");
    if (is_localization_model(scenario.model)) {
      require(a.size() == n, "sensor position dimension must equal dim");
    }
  }
  require(scenario.grid.size() >= 1, "target grid must contain at least one point");
  for (const auto& p : scenario.grid.points) {
    require(p.size() == n, "grid point dimension must equal dim");
  }
  // Re-run the distinctness check on the final point list.
  (void)grid_from_points(scenario.grid.points);
}

Matrix fim_block(const ModelParams& model, std::size_t sensor_index, const Vector& sensor,
                 const Vector& theta) {
  if (const auto* lin = std::get_if<LinearModel>(&model)) {
    if (sensor_index >= lin->regressors.size()) {
      throw ConfigError("linear: no regressor for sensor " + std::to_string(sensor_index));
    }
    const Vector& h = lin->regressors[sensor_index];
    return h * h.transpose() / lin->variances[sensor_index];
  }

  if (sensor.size() != 2 || theta.size() != 2) {
    throw ConfigError("localization models are two-dimensional");
  }
  const Vector diff = theta - sensor;
  const double d2 = diff.squaredNorm();
  if (d2 == 0.0) throw SingularityError(sensor_index, std::nullopt);
  const double d = std::sqrt(d2);
  const Matrix outer = diff * diff.transpose();

  return std::visit(
      overloaded{
          [&](const RangeModel& m) -> Matrix {
            const double var = m.sigma2 * std::pow(d, m.eta);
            return outer / (var * d2);
          },
          [&](const RssModel& m) -> Matrix {
            const double c = 50.0 * m.eta * m.eta / (m.sigma_db * m.sigma_db * d2 * d2 *
                                                     std::numbers::ln10);
            return c * outer;
          },
          [&](const BearingModel& m) -> Matrix {
            // P = [0 1; -1 0]
            const Eigen::Vector2d rotated(diff(1), -diff(0));
            return rotated * rotated.transpose() / (m.sigma2 * d2 * d2);
          },
          [&](const EnergyModel& m) -> Matrix {
            const double s = m.beta + d2;
            const double c = 4.0 * m.energy * m.beta * m.beta / (m.sigma2 * s * s);
            return c * outer;
          },
          [&](const LinearModel&) -> Matrix { return {}; },
      },
      model);
}

FimAtomSet::FimAtomSet(std::size_t sensors, std::size_t points, std::size_t dim,
                       std::vector<Matrix> blocks)
    : sensors_(sensors), points_(points), dim_(dim), blocks_(std::move(blocks)) {
  if (blocks_.size() != sensors_ * points_) {
    throw ConfigError("atom set expects sensors * points blocks");
  }
  const auto n = static_cast<Eigen::Index>(dim_);
  for (const auto& b : blocks_) {
    if (b.rows() != n || b.cols() != n) throw ConfigError("atom block has the wrong size");
  }
}

Matrix FimAtomSet::weighted_sum(const Selection& w, std::size_t d, const Matrix* prior) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Matrix s = prior ? *prior : Matrix::Zero(n, n);
  for (std::size_t m = 0; m < sensors_; ++m) {
    const double wm = w(static_cast<Eigen::Index>(m));
    if (wm != 0.0) s.noalias() += wm * (*this)(m, d);
  }
  return s;
}

FimAtomSet assemble_atoms(const Scenario& scenario) {
  validate_scenario(scenario);
  const std::size_t M = scenario.sensor_count();
  const std::size_t D = scenario.grid.size();
  const bool localization = is_localization_model(scenario.model);

  std::vector<Matrix> blocks;
  blocks.reserve(M * D);
  const Vector no_position;
  for (std::size_t m = 0; m < M; ++m) {
    const Vector& a = localization ? scenario.sensors[m] : no_position;
    for (std::size_t d = 0; d < D; ++d) {
      const Vector& theta = scenario.grid.points[d];
      if (localization && a == theta) throw SingularityError(m, d);
      Matrix f = fim_block(scenario.model, m, a, theta);
      // Symmetrize exactly; outer products can differ in the last bit.
      f = 0.5 * (f + f.transpose()).eval();
      blocks.push_back(std::move(f));
    }
  }
  return FimAtomSet(M, D, static_cast<std::size_t>(scenario.dim), std::move(blocks));
}

}  // namespace sensel
