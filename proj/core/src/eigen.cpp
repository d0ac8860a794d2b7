#include "sensel/eigen.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "sensel/errors.hpp"

namespace sensel {

namespace {

void canonicalize(Vector& v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  if (v[idx] < 0.0) v = -v;
}

void check_square(const Matrix& s) {
  if (s.rows() != s.cols() || s.rows() == 0) {
    throw ConfigError("eigenvalue routines need a non-empty square matrix");
  }
  if (!s.allFinite()) throw NumericalError("matrix has non-finite entries");
}

struct PowerOutcome {
  double rayleigh = 0.0;
  Vector vector;
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Plain power iteration on A from v0. The residual is ||A v - rho v||.
PowerOutcome power_iterate(const Matrix& a, Vector v, double stop, int max_iter) {
  PowerOutcome best;
  best.residual = std::numeric_limits<double>::infinity();
  v.normalize();
  for (int it = 0; it < max_iter; ++it) {
    const Vector y = a * v;
    const double rho = v.dot(y);
    const double residual = (y - rho * v).norm();
    if (residual < best.residual) {
      best.rayleigh = rho;
      best.vector = v;
      best.residual = residual;
    }
    best.iterations = it + 1;
    if (residual <= stop) {
      best.converged = true;
      return best;
    }
    const double norm = y.norm();
    if (norm == 0.0) {
      // v lies in the null space of A: rho = 0 is exact.
      best.converged = true;
      return best;
    }
    v = y / norm;
  }
  return best;
}

Vector generic_start(Eigen::Index n) {
  std::mt19937_64 rng(0x5eed5e15ULL);
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

}  // namespace

EigenPair power_min_eig(const Matrix& s, const PowerIterationOptions& options) {
  check_square(s);
  if (!(options.tol > 0.0) || options.max_iter < 1) {
    throw ConfigError("power iteration needs tol > 0 and max_iter >= 1");
  }
  const Eigen::Index n = s.rows();
  const double scale = s.cwiseAbs().maxCoeff();
  if (scale == 0.0) return {0.0, Vector::Unit(n, 0)};

  Vector start_max = Vector::Unit(n, 0);
  Vector start_min = generic_start(n);
  EigenPair best{0.0, start_min};
  double best_residual = std::numeric_limits<double>::infinity();

  for (Eigen::Index attempt = 0; attempt <= n; ++attempt) {
    const PowerOutcome top = power_iterate(s, start_max, options.tol * (1.0 + scale), options.max_iter);
    const double lambda_max = top.rayleigh;
    const double stop = options.tol * (1.0 + std::abs(lambda_max));

    const Matrix shifted = lambda_max * Matrix::Identity(n, n) - s;
    const PowerOutcome low = power_iterate(shifted, start_min, stop, options.max_iter);
    const double lambda_min = lambda_max - low.rayleigh;

    if (low.rayleigh < -stop) {
      // An eigenvalue of S lies above the estimated lambda_max.
      start_max = low.vector;
      continue;
    }
    Vector v = low.vector;
    canonicalize(v);
    if (low.converged) return {lambda_min, v};
    if (low.residual < best_residual) {
      best_residual = low.residual;
      best = {lambda_min, v};
    }
    break;
  }
  throw ConvergenceError("power iteration did not reach tolerance within " +
                             std::to_string(options.max_iter) + " iterations",
                         best.value, best.vector);
}

EigenPair closed_form_min_eig(const Matrix& s) {
  check_square(s);
  const Eigen::Index n = s.rows();
  if (n == 1) return {s(0, 0), Vector::Ones(1)};
  if (n == 2) {
    const double a = s(0, 0);
    const double b = 0.5 * (s(0, 1) + s(1, 0));
    const double c = s(1, 1);
    const double lambda = 0.5 * (a + c) - std::hypot(0.5 * (a - c), b);
    Vector u(2);
    Vector w(2);
    u << b, lambda - a;
    w << lambda - c, b;
    Vector v = u.squaredNorm() >= w.squaredNorm() ? u : w;
    const double norm = v.norm();
    if (norm == 0.0) {
      v = Vector::Unit(2, 0);
    } else {
      v /= norm;
    }
    canonicalize(v);
    return {lambda, v};
  }
  if (n == 3) {
    Eigen::Matrix3d m = s;
    m = 0.5 * (m + m.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver;
    solver.computeDirect(m);
    Vector v = solver.eigenvectors().col(0);
    canonicalize(v);
    return {solver.eigenvalues()[0], v};
  }
  throw ConfigError("closed-form eigenpair only available for N <= 3");
}

EigenPair min_eigenpair(const Matrix& s) {
  if (s.rows() <= 3) return closed_form_min_eig(s);
  try {
    return power_min_eig(s);
  } catch (const ConvergenceError&) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (s + s.transpose()));
    Vector v = solver.eigenvectors().col(0);
    canonicalize(v);
    return {solver.eigenvalues()[0], v};
  }
}

}  // namespace sensel
