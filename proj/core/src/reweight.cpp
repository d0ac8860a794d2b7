#include "sensel/reweight.hpp"

#include <string>

#include "sensel/errors.hpp"
#include "sensel/random.hpp"

namespace sensel {

InnerSolver parse_inner_solver(std::string_view text) {
  if (text == "barrier") return InnerSolver::Barrier;
  if (text == "subgradient") return InnerSolver::Subgradient;
  throw ConfigError("unknown solver '" + std::string(text) + "' (expected subgradient or barrier)");
}

std::string_view to_string(InnerSolver solver) {
  return solver == InnerSolver::Barrier ? "barrier" : "subgradient";
}

ReweightResult reweighted_solve(const FimAtomSet& atoms, const Constraint& c,
                                const ReweightParams& params, const BarrierParams& barrier,
                                const SubgradientParams& subgradient) {
  if (params.i_max < 0) throw ConfigError("reweighting iterations must be non-negative");
  if (!(params.delta > 0.0)) throw ConfigError("reweighting delta must be positive");
  if (!(params.tie_break >= 0.0 && params.tie_break < 1.0)) {
    throw ConfigError("reweighting tie_break must lie in [0, 1)");
  }
  if (params.inner == InnerSolver::Barrier && c.kind != ConstraintKind::MinEig) {
    throw ConfigError("the barrier solver handles the min_eig constraint only");
  }

  const auto m_count = static_cast<Eigen::Index>(atoms.sensors());
  ReweightResult result;
  Vector u = Vector::Ones(m_count);
  for (int i = 0; i <= params.i_max; ++i) {
    result.weights.push_back(u);
    try {
      if (params.inner == InnerSolver::Barrier) {
        BarrierResult inner = barrier_newton(atoms, c, barrier, u);
        result.w = inner.w;
        result.gap = inner.gap;
        result.t = inner.t;
        result.certificate = std::move(inner.certificate);
        result.inner_iterations += inner.newton_iterations;
        result.trace.insert(result.trace.end(), inner.trace.begin(), inner.trace.end());
      } else {
        SubgradientResult inner = projected_subgradient(atoms, c, subgradient, u);
        result.w = inner.w;
        result.inner_iterations += static_cast<int>(inner.trace.size());
        result.trace.insert(result.trace.end(), inner.trace.begin(), inner.trace.end());
      }
    } catch (Error& e) {
      e.prepend("reweighting iteration " + std::to_string(i));
      throw;
    }
    result.iterates.push_back(result.w);

    auto rng = make_stream({params.seed, static_cast<std::uint64_t>(i)});
    Vector next(m_count);
    for (Eigen::Index m = 0; m < m_count; ++m) {
      next[m] = (1.0 + params.tie_break * uniform01(rng)) / (params.delta + result.w[m]);
    }
    u = next;
  }
  return result;
}

}  // namespace sensel
