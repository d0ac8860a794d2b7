#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sensel/constraint.hpp"
#include "sensel/scenario.hpp"

namespace sensel {

/// Coordinatewise clamp to [0, 1].
Vector box_project(const Vector& w);

struct IterationRecord {
  int k = 0;
  double objective = 0.0;
  double constraint_value = 0.0;
  bool feasible = false;
  double step = 0.0;
};

using SolverTrace = std::vector<IterationRecord>;

struct SubgradientParams {
  int k_max = 1000;
  /// Optimal objective when the number of sensors is known (Polyak epsilon).
  std::optional<double> known_card;
  /// Reserved; the method is deterministic.
  std::uint64_t seed = 0;
  /// Store every evaluated iterate in the result.
  bool keep_iterates = false;
};

struct SubgradientResult {
  /// Best feasible iterate: smallest u^T w over feasible iterates, earliest on ties.
  Selection w;
  /// Iterate after the last update.
  Selection w_last;
  double objective = 0.0;
  int best_iteration = 0;
  SolverTrace trace;
  /// Evaluated iterates in order (only with keep_iterates).
  std::vector<Selection> iterates;
};

/// Polyak epsilon: known_card when given, else f_best + 10 / (10 + k), with
/// the current objective standing in for f_best before the first feasible iterate.
double polyak_epsilon(const std::optional<double>& known_card, double f_best, double objective,
                      int k);

/// Step length on the infeasible branch. MinEig: (value + epsilon) / ||g||^2.
/// Trace and LogDet: violation * (1 + 10 / (10 + k)) / ||g||^2.
double infeasible_step(const Constraint& c, double value, double grad_sq_norm, double epsilon,
                       int k);

/// Projected subgradient method on min u^T w subject to the constraint and
/// w in [0,1]^M, started from w = 1. Feasible iterates move along -u with
/// step 1/sqrt(k); infeasible iterates move along the constraint
/// (super)gradient. For Trace and LogDet a singular S_d is handled with a
/// min-eigenvalue supergradient step.
///
/// Throws StallError on a zero gradient at an infeasible iterate and
/// InfeasibleError when no iterate is feasible.
SubgradientResult projected_subgradient(const FimAtomSet& atoms, const Constraint& c,
                                        const SubgradientParams& params = {},
                                        const std::optional<Vector>& weights = std::nullopt);

/// Checks that u has M finite non-negative entries; returns 1_M when absent.
Vector objective_weights(const std::optional<Vector>& weights, std::size_t sensors);

}  // namespace sensel
