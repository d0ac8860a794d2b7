#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace sensel;
using sensel::testing::t1_scenario;
using sensel::testing::vec2;

namespace {

FimAtomSet ring8_atoms() {
  Scenario s;
  s.model = RangeModel{1.0, 0.0};
  for (int i = 0; i < 8; ++i) {
    const double a = i * std::numbers::pi / 4.0;
    s.sensors.push_back(vec2(std::cos(a), std::sin(a)));
  }
  s.grid = grid_from_points({vec2(0, 0)});
  return assemble_atoms(s);
}

}  // namespace

TEST(Metropolis, RingWeights) {
  const Matrix w = metropolis_weights({{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 4);
  EXPECT_NEAR(w(0, 1), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(w(0, 0), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(w(0, 2), 0.0);
}

TEST(Metropolis, DoublyStochasticSymmetric) {
  const Matrix w = metropolis_weights({{0, 1}, {1, 2}, {1, 3}, {3, 4}, {4, 4}, {2, 1}}, 5);
  EXPECT_TRUE(w.isApprox(w.transpose(), 0.0));
  EXPECT_NEAR((w.rowwise().sum().array() - 1.0).abs().maxCoeff(), 0.0, 1e-15);
  EXPECT_GE(w.minCoeff(), 0.0);
}

TEST(Metropolis, RejectsBadGraphs) {
  EXPECT_THROW(metropolis_weights({{0, 1}}, 3), ConfigError);
  EXPECT_THROW(metropolis_weights({{0, 5}}, 3), ConfigError);
  EXPECT_THROW(metropolis_weights({}, 0), ConfigError);
}

TEST(Topology, CompleteAveragesInOneRound) {
  const Topology t = complete_topology(5);
  EXPECT_TRUE(t.weights.isApprox(Matrix::Constant(5, 5, 0.2), 1e-15));
  Vector v(5);
  v << 1, 2, 3, 4, 5;
  const Vector avg = gossip_average(v, t.weights, 1);
  EXPECT_NEAR((avg.array() - 3.0).abs().maxCoeff(), 0.0, 1e-14);
}

TEST(Topology, GossipPreservesMeanAndConverges) {
  const Topology t = ring_topology(8);
  Vector v(8);
  v << 1, 0, 0, 0, 0, 0, 0, 0;
  const Vector after = gossip_average(v, t.weights, 5);
  EXPECT_NEAR(after.sum(), 1.0, 1e-14);
  const Vector many = gossip_average(v, t.weights, 500);
  EXPECT_NEAR((many.array() - 0.125).abs().maxCoeff(), 0.0, 1e-10);
  EXPECT_EQ(gossip_average(v, t.weights, 0), v);
}

TEST(Topology, MatrixGossipMatchesEntrywise) {
  const Topology t = ring_topology(4);
  std::vector<Matrix> values;
  for (int i = 0; i < 4; ++i) values.push_back(Matrix::Constant(2, 2, i));
  const auto out = gossip_average(values, t.weights, 3);
  Vector v(4);
  v << 0, 1, 2, 3;
  const Vector expected = gossip_average(v, t.weights, 3);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(out[i](1, 0), expected[i], 1e-15);
}

TEST(Topology, ReadEdgeList) {
  std::istringstream in("# ring\n0 1\n1 2\n\n2 0\n");
  const Topology t = read_edge_list(in);
  EXPECT_EQ(t.nodes, 3u);
  EXPECT_EQ(t.edges.size(), 3u);
  std::istringstream bad("0 1 2\n");
  EXPECT_THROW(read_edge_list(bad), ConfigError);
  std::istringstream neg("0 -1\n");
  EXPECT_THROW(read_edge_list(neg), ConfigError);
  std::istringstream short_list("0 1\n");
  EXPECT_THROW(read_edge_list(short_list, 3), ConfigError);
}

TEST(Distributed, CompleteGraphMatchesCentralized) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  DistributedParams p;
  p.rounds = 1;
  const DistributedResult r =
      run_distributed(atoms, {ConstraintKind::MinEig, 1.0, {}}, complete_topology(4), p);
  EXPECT_LE(r.max_iterate_deviation, 1e-10);
  EXPECT_EQ(r.divergence_events, 0);
  EXPECT_EQ(r.iterates.size(), 201u);
}

TEST(Distributed, Ring8ConvergesWithEnoughRounds) {
  const FimAtomSet atoms = ring8_atoms();
  DistributedParams p;
  p.rounds = 10;
  const DistributedResult r =
      run_distributed(atoms, {ConstraintKind::MinEig, 1.0, {}}, ring_topology(8), p);
  EXPECT_LE(std::abs(r.objective - r.centralized_objective), 0.05 * r.centralized_objective);
}

TEST(Distributed, FewRoundsCountDivergence) {
  const FimAtomSet atoms = ring8_atoms();
  DistributedParams p;
  p.rounds = 1;
  const DistributedResult r =
      run_distributed(atoms, {ConstraintKind::MinEig, 1.0, {}}, ring_topology(8), p);
  EXPECT_GE(r.divergence_events, 0);
  EXPECT_EQ(r.trace.size(), 200u);
  for (const Vector& w : r.iterates) {
    EXPECT_GE(w.minCoeff(), 0.0);
    EXPECT_LE(w.maxCoeff(), 1.0);
  }
}

TEST(Distributed, RejectsMismatch) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  EXPECT_THROW(run_distributed(atoms, {ConstraintKind::MinEig, 1.0, {}}, ring_topology(5)),
               ConfigError);
  EXPECT_THROW(run_distributed(atoms, {ConstraintKind::Trace, 1.0, {}}, ring_topology(4)),
               ConfigError);
}
