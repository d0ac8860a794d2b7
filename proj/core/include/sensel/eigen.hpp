#pragma once

#include "sensel/scenario.hpp"

namespace sensel {

struct EigenPair {
  double value = 0.0;
  Vector vector;
};

struct PowerIterationOptions {
  double tol = 1e-10;
  int max_iter = 10000;
};

/// Smallest eigenpair of a symmetric matrix by two power iterations: the
/// first, started from e_1, estimates lambda_max; the second runs on the
/// shifted matrix lambda_max I - S, whose dominant eigenvalue is
/// lambda_max - lambda_min. When the first stage misses the top of the
/// spectrum (e_1 orthogonal to it) the shift is corrected and both stages
/// rerun. Stops once ||S v - lambda v|| <= tol * (1 + |lambda_max|).
///
/// Throws ConvergenceError carrying the best estimate when max_iter is hit.
EigenPair power_min_eig(const Matrix& s, const PowerIterationOptions& options = {});

/// Closed-form smallest eigenpair for N <= 3. Throws ConfigError otherwise.
EigenPair closed_form_min_eig(const Matrix& s);

/// Smallest eigenpair with the fastest available method: closed form for
/// N <= 3, power iteration above, with a dense fallback if power iteration
/// stalls. The eigenvector sign is canonical (largest-magnitude entry > 0).
EigenPair min_eigenpair(const Matrix& s);

}  // namespace sensel
