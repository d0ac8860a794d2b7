#include "sensel/distributed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "sensel/eigen.hpp"
#include "sensel/errors.hpp"

namespace sensel {

namespace {

bool connected(const std::vector<std::vector<std::size_t>>& adj) {
  if (adj.empty()) return false;
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j : adj[i]) {
      if (!seen[j]) {
        seen[j] = true;
        ++count;
        stack.push_back(j);
      }
    }
  }
  return count == adj.size();
}


}  // namespace

Matrix metropolis_weights(const std::vector<Edge>& edges, std::size_t nodes) {
  if (nodes == 0) throw ConfigError("topology needs at least one node");
  std::set<Edge> unique;
  for (auto [i, j] : edges) {
    if (i >= nodes || j >= nodes) {
      throw ConfigError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") references a node outside [0, " + std::to_string(nodes) + ")");
    }
    if (i != j) unique.insert({std::min(i, j), std::max(i, j)});
  }
  std::vector<std::vector<std::size_t>> adj(nodes);
  for (auto [i, j] : unique) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  if (!connected(adj)) throw ConfigError("topology is not connected");

  const auto n = static_cast<Eigen::Index>(nodes);
  Matrix w = Matrix::Zero(n, n);
  for (auto [i, j] : unique) {
    const double value = 1.0 / (1.0 + static_cast<double>(std::max(adj[i].size(), adj[j].size())));
    w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
    w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
  }
  for (Eigen::Index i = 0; i < n; ++i) w(i, i) = 1.0 - w.row(i).sum();
  return w;
}

Topology make_topology(std::size_t nodes, std::vector<Edge> edges) {
  Topology topo;
  topo.nodes = nodes;
  topo.weights = metropolis_weights(edges, nodes);
  topo.edges = std::move(edges);
  return topo;
}

Topology complete_topology(std::size_t nodes) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::size_t j = i + 1; j < nodes; ++j) edges.emplace_back(i, j);
  }
  return make_topology(nodes, std::move(edges));
}

Topology ring_topology(std::size_t nodes) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < nodes; ++i) edges.emplace_back(i, i + 1);
  if (nodes > 2) edges.emplace_back(nodes - 1, 0);
  return make_topology(nodes, std::move(edges));
}

Topology read_edge_list(std::istream& in, std::size_t nodes) {
  std::vector<Edge> edges;
  std::size_t max_index = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long long i = -1;
    long long j = -1;
    std::string rest;
    if (!(fields >> i >> j) || (fields >> rest) || i < 0 || j < 0) {
      throw ConfigError("edge list line " + std::to_string(line_no) +
                        ": expected two non-negative node indices");
    }
    edges.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    max_index = std::max({max_index, static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
  }
  if (edges.empty() && nodes == 0) throw ConfigError("edge list is empty");
  return make_topology(nodes > 0 ? nodes : max_index + 1, std::move(edges));
}

std::vector<Matrix> gossip_average(const std::vector<Matrix>& values, const Matrix& weights,
                                   int rounds) {
  if (rounds < 0) throw ConfigError("gossip rounds must be non-negative");
  if (static_cast<Eigen::Index>(values.size()) != weights.rows()) {
    throw ConfigError("one value per node is required");
  }
  std::vector<Matrix> current = values;
  for (int r = 0; r < rounds; ++r) {
    std::vector<Matrix> next(current.size());
    for (std::size_t i = 0; i < current.size(); ++i) {
      next[i] = Matrix::Zero(current[i].rows(), current[i].cols());
      for (std::size_t j = 0; j < current.size(); ++j) {
        const double wij = weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (wij != 0.0) next[i] += wij * current[j];
      }
    }
    current = std::move(next);
  }
  return current;
}

Vector gossip_average(const Vector& values, const Matrix& weights, int rounds) {
  if (rounds < 0) throw ConfigError("gossip rounds must be non-negative");
  if (values.size() != weights.rows()) throw ConfigError("one value per node is required");
  Vector current = values;
  for (int r = 0; r < rounds; ++r) {
    Vector next = Vector::Zero(current.size());
    for (Eigen::Index i = 0; i < current.size(); ++i) {
      for (Eigen::Index j = 0; j < current.size(); ++j) {
        if (weights(i, j) != 0.0) next[i] += weights(i, j) * current[j];
      }
    }
    current = std::move(next);
  }
  return current;
}

DistributedResult run_distributed(const FimAtomSet& atoms, const Constraint& c,
                                  const Topology& topology, const DistributedParams& params) {
  if (c.kind != ConstraintKind::MinEig) {
    throw ConfigError("the distributed simulation handles the min_eig constraint only");
  }
  if (topology.nodes != atoms.sensors()) {
    throw ConfigError("topology has " + std::to_string(topology.nodes) + " nodes but there are " +
                      std::to_string(atoms.sensors()) + " sensors");
  }
  if (params.k_max < 1) throw ConfigError("k_max must be at least 1");
  if (params.rounds < 0) throw ConfigError("gossip rounds must be non-negative");
  validate_constraint(c, atoms.dim());

  const std::size_t m_count = atoms.sensors();
  const auto size = static_cast<Eigen::Index>(m_count);
  const double scale = static_cast<double>(m_count);
  const auto n = static_cast<Eigen::Index>(atoms.dim());
  const Matrix prior = c.prior ? *c.prior : Matrix::Zero(n, n);

  DistributedResult result;
  Selection w = Selection::Ones(size);
  result.w_best = w;
  Vector f_best = Vector::Constant(size, std::numeric_limits<double>::infinity());

  for (int k = 1; k <= params.k_max + 1; ++k) {
    result.iterates.push_back(w);
    if (k == params.k_max + 1) break;

    // Local estimates of S_d = J_p + sum_m w_m F_{m,d} at every node. The
    // prior is known to all nodes and added after rescaling.
    std::vector<std::vector<Matrix>> local(m_count, std::vector<Matrix>(atoms.points()));
    for (std::size_t d = 0; d < atoms.points(); ++d) {
      std::vector<Matrix> values(m_count);
      for (std::size_t m = 0; m < m_count; ++m) values[m] = w[static_cast<Eigen::Index>(m)] * atoms(m, d);
      const std::vector<Matrix> averaged = gossip_average(values, topology.weights, params.rounds);
      for (std::size_t m = 0; m < m_count; ++m) local[m][d] = scale * averaged[m] + prior;
    }

    Vector lambda(size);
    Vector g(size);
    for (std::size_t m = 0; m < m_count; ++m) {
      double worst = std::numeric_limits<double>::infinity();
      Vector v;
      std::size_t worst_d = 0;
      for (std::size_t d = 0; d < atoms.points(); ++d) {
        const EigenPair pair = min_eigenpair(local[m][d]);
        if (pair.value < worst) {
          worst = pair.value;
          v = pair.vector;
          worst_d = d;
        }
      }
      lambda[static_cast<Eigen::Index>(m)] = worst;
      g[static_cast<Eigen::Index>(m)] = v.dot(atoms(m, worst_d) * v);
    }

    const Vector g_sq = scale * gossip_average(g.cwiseAbs2().eval(), topology.weights, params.rounds);
    const Vector total = scale * gossip_average(w, topology.weights, params.rounds);

    int feasible_nodes = 0;
    Selection next = w;
    for (Eigen::Index m = 0; m < size; ++m) {
      const bool feasible = satisfies(c, lambda[m]);
      if (feasible) {
        ++feasible_nodes;
        if (total[m] < f_best[m]) {
          f_best[m] = total[m];
          result.w_best[m] = w[m];
        }
        next[m] = std::clamp(w[m] - 1.0 / std::sqrt(static_cast<double>(k)), 0.0, 1.0);
      } else if (g_sq[m] > 0.0) {
        const double eps = polyak_epsilon(params.known_card, f_best[m], total[m], k);
        const double step = infeasible_step(c, lambda[m], g_sq[m], eps, k);
        next[m] = std::clamp(w[m] + step * g[m], 0.0, 1.0);
      }
    }
    if (feasible_nodes != 0 && feasible_nodes != size) ++result.divergence_events;

    IterationRecord rec;
    rec.k = k;
    rec.objective = w.sum();
    rec.constraint_value = lambda.minCoeff();
    rec.feasible = feasible_nodes == size;
    rec.step = 0.0;
    result.trace.push_back(rec);
    w = next;
  }
  result.w = w;
  result.objective = result.w_best.sum();

  SubgradientParams central;
  central.k_max = params.k_max;
  central.known_card = params.known_card;
  central.keep_iterates = true;
  result.centralized = projected_subgradient(atoms, c, central);
  result.centralized_objective = result.centralized.objective;
  for (std::size_t k = 0; k < result.iterates.size() && k < result.centralized.iterates.size(); ++k) {
    const double dev = (result.iterates[k] - result.centralized.iterates[k]).cwiseAbs().maxCoeff();
    result.max_iterate_deviation = std::max(result.max_iterate_deviation, dev);
  }
  return result;
}

}  // namespace sensel
