#pragma once

#include <optional>
#include <vector>

#include "sensel/constraint.hpp"
#include "sensel/scenario.hpp"

namespace sensel {

/// Feasible point of the dual of the relaxed min-eigenvalue problem
///   max  sum_d tr(Z_d (lambda I - J_p)) - 1^T mu
///   s.t. sum_d tr(F_{m,d} Z_d) <= u_m + mu_m,  Z_d >= 0,  mu >= 0.
struct DualCertificate {
  std::vector<Matrix> z;
  Vector mu;
  double threshold = 0.0;
  /// Objective weights u (1_M for the plain problem).
  Vector weights;
  std::optional<Matrix> prior;
  double bound = 0.0;
};

/// sum_d tr(Z_d (lambda I - J_p)) - 1^T mu.
double dual_bound(const DualCertificate& cert);

/// True when every Z_d is PSD (to -1e-10 relative), mu >= 0 and each
/// sensor inequality holds within `tol`.
bool check_dual_feasible(const DualCertificate& cert, const FimAtomSet& atoms, double tol = 1e-8);

/// Interior-point dual recovery: Z_d = S_d^-1 / t with
/// S_d = J_p + sum_m w_m F_{m,d} - lambda I, and
/// mu_m = max(0, sum_d tr(F_{m,d} Z_d) - u_m).
///
/// Throws InfeasibleError when some S_d is not positive definite and
/// ConfigError for t <= 0 or a non-MinEig constraint.
DualCertificate certificate_from_barrier(const Selection& w, const FimAtomSet& atoms,
                                         const Constraint& c, double t,
                                         const std::optional<Vector>& weights = std::nullopt);

}  // namespace sensel
