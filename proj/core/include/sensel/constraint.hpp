#pragma once

#include <cstddef>
#include <optional>

#include "sensel/scenario.hpp"
#include "sensel/thresholds.hpp"

namespace sensel {

/// Accuracy constraint on S_d = J_p + sum_m w_m F_m(theta_d) at every grid point.
struct Constraint {
  ConstraintKind kind = ConstraintKind::MinEig;
  double threshold = 0.0;
  std::optional<Matrix> prior;
};

struct ConstraintEval {
  /// MinEig: min_d lambda_min(S_d). Trace: max_d tr(S_d^-1). LogDet: min_d ln det S_d.
  double value = 0.0;
  /// Derivative of the per-point functional at the worst point. For Trace this
  /// is the gradient of tr(S^-1), so the direction that improves the
  /// constraint is -gradient.
  Vector gradient;
  std::size_t worst_point = 0;
  std::optional<Vector> eigvector;
};

/// Relative slack used by every feasibility decision.
inline constexpr double kFeasibilityTol = 1e-12;

/// Throws ConfigError for a non-finite or non-positive (MinEig, Trace)
/// threshold, or a prior that is not an N x N symmetric PSD matrix.
void validate_constraint(const Constraint& c, std::size_t dim);

/// True when `value` meets the threshold (within kFeasibilityTol).
bool satisfies(const Constraint& c, double value);

/// Amount by which `value` misses the threshold, 0 when satisfied.
double violation(const Constraint& c, double value);

/// Throws InfeasibleError carrying the grid index when some S_d is singular
/// under Trace or LogDet.
ConstraintEval eval_constraint(const FimAtomSet& atoms, const Selection& w, const Constraint& c);

/// Per-point check with early exit. Singular S_d counts as infeasible.
bool is_feasible(const FimAtomSet& atoms, const Selection& w, const Constraint& c);

/// Per grid point: lambda_min - lambda_eig, lambda_tr - tr(S^-1) or
/// ln det - lambda_det. Singular points give -infinity.
Vector constraint_margins(const FimAtomSet& atoms, const Selection& w, const Constraint& c);

/// Smallest entry of constraint_margins.
double constraint_margin(const FimAtomSet& atoms, const Selection& w, const Constraint& c);

}  // namespace sensel
