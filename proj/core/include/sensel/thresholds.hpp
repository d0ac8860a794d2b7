#pragma once

#include <optional>
#include <string_view>

namespace sensel {

enum class ConstraintKind { MinEig, Trace, LogDet };

std::string_view to_string(ConstraintKind kind);

/// Parses "min_eig", "trace" or "log_det". Throws ConfigError otherwise.
ConstraintKind parse_constraint_kind(std::string_view text);

/// Accuracy requirement Pr(||error|| <= radius) >= probability.
struct AccuracySpec {
  double radius = 0.0;       // R_e [m]
  double probability = 0.0;  // P_e in (0, 1)
  int dim = 2;               // N
  /// Geometric mean radius of the confidence ellipsoid for the determinant
  /// measure. Defaults to `radius`.
  std::optional<double> mean_radius;
  /// Chi-squared quantile override for the determinant measure. Defaults to
  /// the inverse chi-squared CDF of `probability` with `dim` degrees of freedom.
  std::optional<double> xi;
};

/// MinEig:  lambda_eig = (N / R_e^2) / (1 - P_e)
/// Trace:   lambda_tr  = (1 - P_e) R_e^2
/// LogDet:  lambda_det = 2N ln(sqrt(xi) / mean_radius)
double thresholds(const AccuracySpec& spec, ConstraintKind kind);

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

/// Inverse CDF of the chi-squared distribution with `dof` degrees of
/// freedom. Closed form for dof = 2, bisection to 1e-10 otherwise.
double chi2_quantile(double probability, int dof);

}  // namespace sensel
