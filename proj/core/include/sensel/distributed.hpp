#pragma once

#include <cstddef>
#include <istream>
#include <utility>
#include <vector>

#include "sensel/constraint.hpp"
#include "sensel/scenario.hpp"
#include "sensel/subgradient.hpp"

namespace sensel {

using Edge = std::pair<std::size_t, std::size_t>;

struct Topology {
  std::size_t nodes = 0;
  std::vector<Edge> edges;
  /// Metropolis averaging matrix: symmetric, doubly stochastic.
  Matrix weights;
};

/// W_ij = 1 / (1 + max(deg_i, deg_j)) on edges, the diagonal takes the rest
/// of each row. Self loops and duplicate edges are ignored. Throws
/// ConfigError for out-of-range nodes or a disconnected graph.
Matrix metropolis_weights(const std::vector<Edge>& edges, std::size_t nodes);

Topology make_topology(std::size_t nodes, std::vector<Edge> edges);
Topology complete_topology(std::size_t nodes);
Topology ring_topology(std::size_t nodes);

/// Edge list with one "i j" pair per line, 0-indexed. Blank lines and lines
/// starting with '#' are skipped. The node count is the largest index + 1
/// unless `nodes` is given.
Topology read_edge_list(std::istream& in, std::size_t nodes = 0);

/// R rounds of x <- W x applied entrywise; node i holds values[i].
std::vector<Matrix> gossip_average(const std::vector<Matrix>& values, const Matrix& weights,
                                   int rounds);
Vector gossip_average(const Vector& values, const Matrix& weights, int rounds);

struct DistributedParams {
  /// Gossip rounds per iteration.
  int rounds = 10;
  int k_max = 200;
  std::optional<double> known_card;
};

struct DistributedResult {
  /// Final iterate held by the nodes (entry m is node m's own weight).
  Selection w;
  /// Per node, the weight it held at the iterate it judged best (smallest
  /// local estimate of 1^T w among iterates it judged feasible).
  Selection w_best;
  /// Iterates in order, starting with w = 1.
  std::vector<Selection> iterates;
  SolverTrace trace;
  /// Iterations in which nodes disagreed on the feasibility branch.
  int divergence_events = 0;
  /// Centralized projected subgradient run with the same parameters.
  SubgradientResult centralized;
  /// max_k ||w_k(distributed) - w_k(centralized)||_inf.
  double max_iterate_deviation = 0.0;
  double objective = 0.0;
  double centralized_objective = 0.0;
};

/// Synchronous simulation of the projected subgradient method over a
/// network in which node m owns sensor m. Each iteration gossips w_m F_m
/// (rescaled by M), lets every node find its local worst point and
/// eigenvector, gossips g_m^2 and w_m for ||g||^2 and 1^T w, and applies the
/// centralized step rule to the node's own weight. MinEig only.
DistributedResult run_distributed(const FimAtomSet& atoms, const Constraint& c,
                                  const Topology& topology, const DistributedParams& params = {});

}  // namespace sensel
