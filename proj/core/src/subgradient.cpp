#include "sensel/subgradient.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sensel/errors.hpp"

namespace sensel {

Vector box_project(const Vector& w) { return w.cwiseMax(0.0).cwiseMin(1.0); }

Vector objective_weights(const std::optional<Vector>& weights, std::size_t sensors) {
  if (!weights) return Vector::Ones(static_cast<Eigen::Index>(sensors));
  if (static_cast<std::size_t>(weights->size()) != sensors) {
    throw ConfigError("objective weights must have one entry per sensor");
  }
  if (!weights->allFinite() || (weights->array() < 0.0).any()) {
    throw ConfigError("objective weights must be finite and non-negative");
  }
  return *weights;
}

double polyak_epsilon(const std::optional<double>& known_card, double f_best, double objective,
                      int k) {
  if (known_card) return *known_card;
  const double base = std::isfinite(f_best) ? f_best : objective;
  return base + 10.0 / (10.0 + k);
}

double infeasible_step(const Constraint& c, double value, double grad_sq_norm, double epsilon,
                       int k) {
  if (c.kind == ConstraintKind::MinEig) return (value + epsilon) / grad_sq_norm;
  return violation(c, value) * (1.0 + 10.0 / (10.0 + k)) / grad_sq_norm;
}

SubgradientResult projected_subgradient(const FimAtomSet& atoms, const Constraint& c,
                                        const SubgradientParams& params,
                                        const std::optional<Vector>& weights) {
  if (params.k_max < 1) throw ConfigError("k_max must be at least 1");
  validate_constraint(c, atoms.dim());
  const Vector u = objective_weights(weights, atoms.sensors());
  const Constraint eig_constraint{ConstraintKind::MinEig, 0.0, c.prior};

  SubgradientResult result;
  Vector w = Vector::Ones(static_cast<Eigen::Index>(atoms.sensors()));
  double f_best = std::numeric_limits<double>::infinity();

  for (int k = 1; k <= params.k_max + 1; ++k) {
    const bool last = k == params.k_max + 1;
    if (params.keep_iterates) result.iterates.push_back(w);

    IterationRecord rec;
    rec.k = k;
    rec.objective = u.dot(w);

    bool singular = false;
    ConstraintEval eval;
    try {
      eval = eval_constraint(atoms, w, c);
    } catch (const InfeasibleError&) {
      singular = true;
      eval = eval_constraint(atoms, w, eig_constraint);
    }
    rec.constraint_value = singular ? std::numeric_limits<double>::quiet_NaN() : eval.value;
    rec.feasible = !singular && satisfies(c, eval.value);

    if (rec.feasible && rec.objective < f_best) {
      f_best = rec.objective;
      result.w = w;
      result.objective = rec.objective;
      result.best_iteration = k;
    }
    if (last) break;

    Vector next;
    if (rec.feasible) {
      rec.step = 1.0 / std::sqrt(static_cast<double>(k));
      next = box_project(w - rec.step * u);
    } else {
      const Vector direction = c.kind == ConstraintKind::Trace && !singular ? -eval.gradient
                                                                             : eval.gradient;
      const double grad_sq = direction.squaredNorm();
      if (!(grad_sq > 0.0) || (singular && !(direction.maxCoeff() > 0.0))) {
        throw StallError("zero constraint gradient at an infeasible iterate (iteration " +
                             std::to_string(k) + ")",
                         k, w);
      }
      if (singular) {
        rec.step = 1.0 / direction.maxCoeff();
      } else {
        const double eps = polyak_epsilon(params.known_card, f_best, rec.objective, k);
        rec.step = infeasible_step(c, eval.value, grad_sq, eps, k);
      }
      next = box_project(w + rec.step * direction);
    }
    result.trace.push_back(rec);
    w = std::move(next);
  }
  result.w_last = w;
  if (!std::isfinite(f_best)) {
    throw InfeasibleError("no feasible iterate within " + std::to_string(params.k_max) +
                          " subgradient iterations");
  }
  return result;
}

}  // namespace sensel
