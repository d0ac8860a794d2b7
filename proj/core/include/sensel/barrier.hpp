#pragma once

#include <optional>
#include <vector>

#include "sensel/constraint.hpp"
#include "sensel/duality.hpp"
#include "sensel/scenario.hpp"
#include "sensel/subgradient.hpp"

namespace sensel {

struct BarrierParams {
  double t0 = 1.0;
  double mu = 10.0;
  /// Absolute duality-gap target; the outer loop stops once D*N/t < gap_tol.
  double gap_tol = 1e-4;
  /// Centering stops when half the squared Newton decrement falls below this.
  double newton_tol = 1e-8;
  double ls_alpha = 0.3;
  double ls_beta = 0.5;
  /// Newton iterations allowed per centering stage.
  int max_newton = 200;
};

/// Throws ConfigError when a parameter is out of range.
void validate_barrier_params(const BarrierParams& params);

struct BarrierResult {
  Selection w;
  DualCertificate certificate;
  double t = 0.0;
  double objective = 0.0;
  /// u^T w - dual bound at the returned point.
  double gap = 0.0;
  /// Certificate gap after each centering stage.
  std::vector<double> stage_gaps;
  int newton_iterations = 0;
  /// One record per centering stage; `step` holds that stage's t.
  SolverTrace trace;
};

/// Minimizes t u^T w - sum_d ln det(J_p + sum_m w_m F_{m,d} - lambda I) over
/// the box with projected Newton steps and an Armijo search along the
/// projection arc, then multiplies t by mu until D*N/t < gap_tol.
///
/// MinEig constraints only. Throws InfeasibleError when w = 1 is not strictly
/// feasible and NumericalError when the reduced Hessian cannot be factored.
BarrierResult barrier_newton(const FimAtomSet& atoms, const Constraint& c,
                             const BarrierParams& params = {},
                             const std::optional<Vector>& weights = std::nullopt);

}  // namespace sensel
