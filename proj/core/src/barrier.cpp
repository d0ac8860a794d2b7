#include "sensel/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>

#include "sensel/errors.hpp"

namespace sensel {

namespace {

/// Cholesky factors of every shifted block S_d, or nothing when some S_d is
/// not positive definite.
struct BarrierPoint {
  std::vector<Eigen::LLT<Matrix>> factors;
  double log_det = 0.0;
};

std::optional<BarrierPoint> factor_blocks(const FimAtomSet& atoms, const Selection& w,
                                          const Constraint& c) {
  const auto n = static_cast<Eigen::Index>(atoms.dim());
  const Matrix shift = c.threshold * Matrix::Identity(n, n);
  const Matrix* prior = c.prior ? &*c.prior : nullptr;
  BarrierPoint point;
  point.factors.reserve(atoms.points());
  for (std::size_t d = 0; d < atoms.points(); ++d) {
    Eigen::LLT<Matrix> llt(atoms.weighted_sum(w, d, prior) - shift);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Vector pivots = llt.matrixL().toDenseMatrix().diagonal();
    if (!(pivots.minCoeff() > 0.0)) return std::nullopt;
    point.log_det += 2.0 * pivots.array().log().sum();
    point.factors.push_back(std::move(llt));
  }
  return point;
}

/// Gradient and Hessian of the barrier term -sum_d ln det S_d. With
/// G_{m,d} = L_d^-1 F_{m,d} L_d^-T the gradient is -tr(G_m) and the Hessian
/// entry (i, j) is <G_i, G_j>_F, summed over d.
void barrier_derivatives(const FimAtomSet& atoms, const BarrierPoint& point, Vector& grad,
                         Matrix& hess) {
  const auto m_count = static_cast<Eigen::Index>(atoms.sensors());
  const auto n = static_cast<Eigen::Index>(atoms.dim());
  grad = Vector::Zero(m_count);
  hess = Matrix::Zero(m_count, m_count);
  Matrix stacked(m_count, n * n);
  for (std::size_t d = 0; d < atoms.points(); ++d) {
    const auto lower = point.factors[d].matrixL();
    for (Eigen::Index m = 0; m < m_count; ++m) {
      const Matrix half = lower.solve(atoms(static_cast<std::size_t>(m), d));
      const Matrix g = lower.solve(half.transpose());
      grad[m] -= g.trace();
      stacked.row(m) = Eigen::Map<const Eigen::RowVectorXd>(g.data(), n * n);
    }
    hess.noalias() += stacked * stacked.transpose();
  }
}

struct CenteringOutcome {
  int iterations = 0;
};

CenteringOutcome center(const FimAtomSet& atoms, const Constraint& c, const Vector& u, double t,
                        const BarrierParams& params, Selection& w, BarrierPoint& point) {
  const auto m_count = static_cast<Eigen::Index>(atoms.sensors());
  CenteringOutcome outcome;
  Vector barrier_grad;
  Matrix hess;
  for (int it = 0; it < params.max_newton; ++it) {
    barrier_derivatives(atoms, point, barrier_grad, hess);
    const Vector grad = t * u + barrier_grad;

    const double proj_dist = (w - box_project(w - grad)).norm();
    const double eps_active = std::min(1e-6, proj_dist);
    std::vector<Eigen::Index> free;
    Vector target = w;
    for (Eigen::Index i = 0; i < m_count; ++i) {
      if (w[i] <= eps_active && grad[i] > 0.0) {
        target[i] = 0.0;
      } else if (w[i] >= 1.0 - eps_active && grad[i] < 0.0) {
        target[i] = 1.0;
      } else {
        free.push_back(i);
      }
    }

    const auto f_count = static_cast<Eigen::Index>(free.size());
    Vector direction = Vector::Zero(m_count);
    if (f_count > 0) {
      Matrix h_ff(f_count, f_count);
      Vector g_f(f_count);
      for (Eigen::Index a = 0; a < f_count; ++a) {
        g_f[a] = grad[free[a]];
        for (Eigen::Index b = 0; b < f_count; ++b) h_ff(a, b) = hess(free[a], free[b]);
      }
      const double rho = 1e-10 * std::max(1.0, h_ff.diagonal().maxCoeff());
      h_ff.diagonal().array() += rho;
      Eigen::LLT<Matrix> llt(h_ff);
      if (llt.info() != Eigen::Success) {
        throw NumericalError("reduced Hessian factorization failed", w);
      }
      const Vector d_f = -llt.solve(g_f);
      if (!d_f.allFinite()) throw NumericalError("non-finite Newton direction", w);
      for (Eigen::Index a = 0; a < f_count; ++a) direction[free[a]] = d_f[a];
    }

    auto arc = [&](double alpha) {
      Vector next = target;
      for (Eigen::Index i : free) next[i] = std::clamp(w[i] + alpha * direction[i], 0.0, 1.0);
      return next;
    };

    const Vector full = arc(1.0);
    const double decrement = -grad.dot(full - w);
    if (!(decrement > 0.0) || 0.5 * decrement <= params.newton_tol) break;

    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, alpha *= params.ls_beta) {
      const Vector next = arc(alpha);
      const Vector delta = next - w;
      const double predicted = grad.dot(delta);
      if (!(predicted < 0.0)) continue;
      auto next_point = factor_blocks(atoms, next, c);
      if (!next_point) continue;
      const double change = t * u.dot(delta) - (next_point->log_det - point.log_det);
      if (change <= params.ls_alpha * predicted) {
        w = next;
        point = std::move(*next_point);
        accepted = true;
        break;
      }
    }
    ++outcome.iterations;
    if (!accepted) break;
  }
  return outcome;
}

}  // namespace

void validate_barrier_params(const BarrierParams& params) {
  if (!(params.t0 > 0.0)) throw ConfigError("barrier t0 must be positive");
  if (!(params.mu > 1.0)) throw ConfigError("barrier mu must exceed 1");
  if (!(params.gap_tol > 0.0) || !(params.newton_tol > 0.0)) {
    throw ConfigError("barrier tolerances must be positive");
  }
  if (!(params.ls_alpha > 0.0 && params.ls_alpha < 0.5)) {
    throw ConfigError("barrier ls_alpha must lie in (0, 0.5)");
  }
  if (!(params.ls_beta > 0.0 && params.ls_beta < 1.0)) {
    throw ConfigError("barrier ls_beta must lie in (0, 1)");
  }
  if (params.max_newton < 1) throw ConfigError("barrier max_newton must be at least 1");
}

BarrierResult barrier_newton(const FimAtomSet& atoms, const Constraint& c,
                             const BarrierParams& params, const std::optional<Vector>& weights) {
  if (c.kind != ConstraintKind::MinEig) {
    throw ConfigError("the barrier solver handles the min_eig constraint only");
  }
  validate_constraint(c, atoms.dim());
  validate_barrier_params(params);
  const Vector u = objective_weights(weights, atoms.sensors());

  Selection w = Vector::Ones(static_cast<Eigen::Index>(atoms.sensors()));
  auto point = factor_blocks(atoms, w, c);
  if (!point) {
    throw InfeasibleError("selecting every sensor does not strictly satisfy the constraint");
  }

  const double barrier_dim = static_cast<double>(atoms.points() * atoms.dim());
  BarrierResult result;
  double t = params.t0;
  for (int stage = 0;; ++stage) {
    const CenteringOutcome outcome = center(atoms, c, u, t, params, w, *point);
    result.newton_iterations += outcome.iterations;

    DualCertificate cert = certificate_from_barrier(w, atoms, c, t, u);
    const double objective = u.dot(w);
    const double gap = objective - cert.bound;
    result.stage_gaps.push_back(gap);

    IterationRecord rec;
    rec.k = stage;
    rec.objective = objective;
    rec.constraint_value = eval_constraint(atoms, w, c).value;
    rec.feasible = satisfies(c, rec.constraint_value);
    rec.step = t;
    result.trace.push_back(rec);

    result.w = w;
    result.certificate = std::move(cert);
    result.t = t;
    result.objective = objective;
    result.gap = gap;
    if (barrier_dim / t < params.gap_tol) break;
    t *= params.mu;
  }
  return result;
}

}  // namespace sensel
