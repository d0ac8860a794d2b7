#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sensel/barrier.hpp"
#include "sensel/constraint.hpp"
#include "sensel/duality.hpp"
#include "sensel/subgradient.hpp"

namespace sensel {

enum class InnerSolver { Barrier, Subgradient };

InnerSolver parse_inner_solver(std::string_view text);
std::string_view to_string(InnerSolver solver);

struct ReweightParams {
  int i_max = 10;
  double delta = 1e-8;
  InnerSolver inner = InnerSolver::Barrier;
  /// Relative random perturbation of each updated weight. Identical atoms
  /// produce identical relaxed entries; the perturbation lets the next
  /// weighted solve pick one of them.
  double tie_break = 1e-9;
  std::uint64_t seed = 0;
};

struct ReweightResult {
  /// Relaxed solution of the last weighted solve.
  Selection w;
  /// Relaxed solution of every weighted solve, starting with the plain l1 one.
  std::vector<Selection> iterates;
  /// Objective weights used by every solve (u[0] = 1).
  std::vector<Vector> weights;
  /// Concatenated inner traces.
  SolverTrace trace;
  /// Certificate of the last solve (barrier inner solver only).
  std::optional<DualCertificate> certificate;
  double gap = 0.0;
  /// Final barrier parameter of the last solve (barrier inner solver only).
  double t = 0.0;
  int inner_iterations = 0;
};

/// Runs i_max + 1 weighted solves. Solve i uses weights u[i]; afterwards
/// u[i+1]_m = (1 + tie_break * xi_m) / (delta + w[i]_m) with xi_m uniform in
/// [0, 1) from a stream seeded by (seed, i). Inner errors are rethrown with
/// the outer index prepended to the message.
ReweightResult reweighted_solve(const FimAtomSet& atoms, const Constraint& c,
                                const ReweightParams& params,
                                const BarrierParams& barrier = {},
                                const SubgradientParams& subgradient = {});

}  // namespace sensel
