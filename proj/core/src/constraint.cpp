#include "sensel/constraint.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "sensel/eigen.hpp"
#include "sensel/errors.hpp"

namespace sensel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const Matrix* prior_ptr(const Constraint& c) { return c.prior ? &*c.prior : nullptr; }

void check_selection(const FimAtomSet& atoms, const Selection& w) {
  if (static_cast<std::size_t>(w.size()) != atoms.sensors()) {
    throw ConfigError("selection has " + std::to_string(w.size()) + " entries, expected " +
                      std::to_string(atoms.sensors()));
  }
}

/// Cholesky factor of S, or nothing when S is numerically singular.
std::optional<Eigen::LLT<Matrix>> factor(const Matrix& s) {
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const double max_diag = s.diagonal().cwiseAbs().maxCoeff();
  const Vector pivots = llt.matrixL().toDenseMatrix().diagonal();
  if (!(pivots.cwiseAbs2().minCoeff() > 1e-14 * max_diag)) return std::nullopt;
  return llt;
}

struct PointValue {
  double value = 0.0;
  bool singular = false;
};

PointValue point_value(const Matrix& s, ConstraintKind kind) {
  if (kind == ConstraintKind::MinEig) return {min_eigenpair(s).value, false};
  const auto llt = factor(s);
  if (!llt) return {0.0, true};
  if (kind == ConstraintKind::Trace) {
    const Matrix inv = llt->solve(Matrix::Identity(s.rows(), s.cols()));
    return {inv.trace(), false};
  }
  const Vector pivots = llt->matrixL().toDenseMatrix().diagonal();
  return {2.0 * pivots.array().log().sum(), false};
}

/// Is a strictly worse than b for this kind?
bool worse(ConstraintKind kind, double a, double b) {
  return kind == ConstraintKind::Trace ? a > b : a < b;
}

double margin_of(const Constraint& c, double value) {
  return c.kind == ConstraintKind::Trace ? c.threshold - value : value - c.threshold;
}

}  // namespace

void validate_constraint(const Constraint& c, std::size_t dim) {
  if (!std::isfinite(c.threshold)) throw ConfigError("constraint threshold must be finite");
  if (c.kind != ConstraintKind::LogDet && !(c.threshold > 0.0)) {
    throw ConfigError(std::string(to_string(c.kind)) + " threshold must be positive");
  }
  if (c.prior) {
    const Matrix& p = *c.prior;
    if (static_cast<std::size_t>(p.rows()) != dim || static_cast<std::size_t>(p.cols()) != dim) {
      throw ConfigError("prior must be " + std::to_string(dim) + " x " + std::to_string(dim));
    }
    if (!p.allFinite()) throw ConfigError("prior has non-finite entries");
    const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
    if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw ConfigError("prior must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(p, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues()[0] < -1e-10 * scale) throw ConfigError("prior must be PSD");
  }
}

bool satisfies(const Constraint& c, double value) {
  const double slack = kFeasibilityTol * std::max(1.0, std::abs(c.threshold));
  return margin_of(c, value) >= -slack;
}

double violation(const Constraint& c, double value) {
  return std::max(0.0, -margin_of(c, value));
}

ConstraintEval eval_constraint(const FimAtomSet& atoms, const Selection& w, const Constraint& c) {
  check_selection(atoms, w);
  const std::size_t m_count = atoms.sensors();
  const Matrix* prior = prior_ptr(c);

  ConstraintEval out;
  out.gradient = Vector::Zero(static_cast<Eigen::Index>(m_count));

  if (c.kind == ConstraintKind::MinEig) {
    double best = kInf;
    Vector v_best;
    for (std::size_t d = 0; d < atoms.points(); ++d) {
      const EigenPair pair = min_eigenpair(atoms.weighted_sum(w, d, prior));
      if (pair.value < best) {
        best = pair.value;
        v_best = pair.vector;
        out.worst_point = d;
      }
    }
    out.value = best;
    for (std::size_t m = 0; m < m_count; ++m) {
      out.gradient[static_cast<Eigen::Index>(m)] = v_best.dot(atoms(m, out.worst_point) * v_best);
    }
    out.eigvector = v_best;
    return out;
  }

  bool first = true;
  Matrix inv_best;
  for (std::size_t d = 0; d < atoms.points(); ++d) {
    const Matrix s = atoms.weighted_sum(w, d, prior);
    const auto llt = factor(s);
    if (!llt) {
      throw InfeasibleError("information matrix is singular at grid point " + std::to_string(d), d);
    }
    const Matrix inv = llt->solve(Matrix::Identity(s.rows(), s.cols()));
    double value = 0.0;
    if (c.kind == ConstraintKind::Trace) {
      value = inv.trace();
    } else {
      value = 2.0 * llt->matrixL().toDenseMatrix().diagonal().array().log().sum();
    }
    if (first || worse(c.kind, value, out.value)) {
      first = false;
      out.value = value;
      out.worst_point = d;
      inv_best = inv;
    }
  }
  const Matrix inv_sq = inv_best * inv_best;
  for (std::size_t m = 0; m < m_count; ++m) {
    const Matrix& f = atoms(m, out.worst_point);
    out.gradient[static_cast<Eigen::Index>(m)] = c.kind == ConstraintKind::Trace
                                                     ? -inv_sq.cwiseProduct(f).sum()
                                                     : inv_best.cwiseProduct(f).sum();
  }
  return out;
}

bool is_feasible(const FimAtomSet& atoms, const Selection& w, const Constraint& c) {
  check_selection(atoms, w);
  const Matrix* prior = prior_ptr(c);
  for (std::size_t d = 0; d < atoms.points(); ++d) {
    const PointValue pv = point_value(atoms.weighted_sum(w, d, prior), c.kind);
    if (pv.singular || !satisfies(c, pv.value)) return false;
  }
  return true;
}

Vector constraint_margins(const FimAtomSet& atoms, const Selection& w, const Constraint& c) {
  check_selection(atoms, w);
  const Matrix* prior = prior_ptr(c);
  Vector margins(static_cast<Eigen::Index>(atoms.points()));
  for (std::size_t d = 0; d < atoms.points(); ++d) {
    const PointValue pv = point_value(atoms.weighted_sum(w, d, prior), c.kind);
    margins[static_cast<Eigen::Index>(d)] = pv.singular ? -kInf : margin_of(c, pv.value);
  }
  return margins;
}

double constraint_margin(const FimAtomSet& atoms, const Selection& w, const Constraint& c) {
  return constraint_margins(atoms, w, c).minCoeff();
}

}  // namespace sensel
