#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace sensel {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Selection vector w: relaxed in [0,1]^M or Boolean in {0,1}^M.
using Selection = Eigen::VectorXd;

/// Axis-aligned rectangle in meters.
struct Rect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
};

/// Finite set of parameter values at which the accuracy constraint is enforced.
struct DomainGrid {
  std::vector<Vector> points;
  /// Set when the grid was generated as a lattice over an area.
  std::optional<Rect> area;
  std::optional<double> resolution;

  std::size_t size() const { return points.size(); }
};

/// Regular lattice over `area` with spacing `resolution`, starting at the
/// lower-left corner. The upper boundary is included only when the
/// resolution divides the extent. Points are ordered x-major.
DomainGrid build_grid(const Rect& area, double resolution);

/// Explicit grid; rejects empty lists and duplicate points.
DomainGrid grid_from_points(std::vector<Vector> points);

/// y_m = d_m + n_m with var(n_m) = sigma2 * d_m^eta.
struct RangeModel {
  double sigma2 = 1.0;
  double eta = 0.0;
};

/// Log-normal shadowing, sigma_db in dB. y0 and d0 do not enter the FIM.
struct RssModel {
  double sigma_db = 1.0;
  double eta = 2.0;
  double y0 = 0.0;
  double d0 = 1.0;
};

/// Bearing-only direction finding. sigma2 is used in the caller's units; no
/// degree/radian conversion happens here.
struct BearingModel {
  double sigma2 = 1.0;
};

/// Point source energy with attenuation beta / (beta + d^2).
struct EnergyModel {
  double energy = 1.0;
  double beta = 1.0;
  double sigma2 = 1.0;
};

/// y_m = h_m^T theta + n_m, var(n_m) = variances[m].
struct LinearModel {
  std::vector<Vector> regressors;
  std::vector<double> variances;
};

using ModelParams = std::variant<RangeModel, RssModel, BearingModel, EnergyModel, LinearModel>;

std::string_view model_name(const ModelParams& model);

/// True for the four scalar localization models (rank-one blocks, need d_m > 0).
bool is_localization_model(const ModelParams& model);

/// Throws ConfigError when parameters are out of range.
void validate_model(const ModelParams& model);

struct Scenario {
  /// Sensor positions a_m. Optional for the linear model, where sensors are
  /// identified by index only.
  std::vector<Vector> sensors;
  ModelParams model;
  DomainGrid grid;
  int dim = 2;

  /// Number of candidate sensors M.
  std::size_t sensor_count() const;
};

/// Checks the scenario invariants (M >= 1, finite positions, dimensions,
/// distinct grid points, model parameters). Throws ConfigError.
void validate_scenario(const Scenario& scenario);

/// Per-sensor Fisher information F_m(theta) for one sensor and one parameter
/// value. `sensor_index` selects the regressor for the linear model.
///
/// The energy model uses the coefficient 4 e beta^2 / (sigma2 (beta + d^2)^2).
/// A direct derivative of beta / (beta + d^2) puts (beta + d^2)^4 in the
/// denominator instead; see the README section on model conventions.
///
/// Throws SingularityError when d_m = 0 for a localization model.
Matrix fim_block(const ModelParams& model, std::size_t sensor_index, const Vector& sensor,
                 const Vector& theta);

/// The M x D array of N x N information blocks. The stacked block-diagonal
/// matrix is never formed: lambda_min of a block diagonal is the minimum over
/// its blocks, so every kernel works one grid point at a time.
class FimAtomSet {
 public:
  FimAtomSet() = default;
  FimAtomSet(std::size_t sensors, std::size_t points, std::size_t dim, std::vector<Matrix> blocks);

  std::size_t sensors() const { return sensors_; }
  std::size_t points() const { return points_; }
  std::size_t dim() const { return dim_; }

  const Matrix& operator()(std::size_t m, std::size_t d) const { return blocks_[m * points_ + d]; }

  /// prior + sum_m w_m F_m(theta_d).
  Matrix weighted_sum(const Selection& w, std::size_t d, const Matrix* prior = nullptr) const;

 private:
  std::size_t sensors_ = 0;
  std::size_t points_ = 0;
  std::size_t dim_ = 0;
  std::vector<Matrix> blocks_;
};

/// Evaluates fim_block for every (sensor, grid point) pair.
FimAtomSet assemble_atoms(const Scenario& scenario);

}  // namespace sensel
