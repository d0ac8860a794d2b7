#include <random>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace sensel;
using sensel::testing::random_range_scenario;
using sensel::testing::t1_scenario;

namespace {

FimAtomSet duplicates(std::size_t m) {
  return FimAtomSet(m, 1, 2, std::vector<Matrix>(m, 2.0 * Matrix::Identity(2, 2)));
}

}  // namespace

TEST(Reweight, ParseInnerSolver) {
  EXPECT_EQ(parse_inner_solver("barrier"), InnerSolver::Barrier);
  EXPECT_EQ(parse_inner_solver("subgradient"), InnerSolver::Subgradient);
  EXPECT_THROW(parse_inner_solver("simplex"), ConfigError);
  EXPECT_EQ(to_string(InnerSolver::Subgradient), "subgradient");
}

TEST(Reweight, ZeroIterationsIsPlainSolve) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  const Constraint c{ConstraintKind::MinEig, 1.0, {}};
  ReweightParams p;
  p.i_max = 0;
  const ReweightResult r = reweighted_solve(atoms, c, p);
  EXPECT_EQ(r.w, barrier_newton(atoms, c).w);
  ASSERT_EQ(r.iterates.size(), 1u);
  ASSERT_EQ(r.weights.size(), 1u);
  EXPECT_EQ(r.weights[0], Vector::Ones(4));
  ASSERT_TRUE(r.certificate.has_value());
}

TEST(Reweight, WeightUpdateRule) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  ReweightParams p;
  p.i_max = 2;
  p.tie_break = 0.0;
  const ReweightResult r = reweighted_solve(atoms, {ConstraintKind::MinEig, 1.0, {}}, p);
  ASSERT_EQ(r.weights.size(), 3u);
  for (std::size_t i = 1; i < r.weights.size(); ++i) {
    const Vector expected = (p.delta + r.iterates[i - 1].array()).inverse().matrix();
    EXPECT_TRUE(r.weights[i].isApprox(expected, 1e-15));
  }
}

TEST(Reweight, TieBreakStaysWithinRelativeBound) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  ReweightParams p;
  p.i_max = 1;
  p.tie_break = 1e-3;
  const ReweightResult r = reweighted_solve(atoms, {ConstraintKind::MinEig, 1.0, {}}, p);
  const Vector base = (p.delta + r.iterates[0].array()).inverse().matrix();
  for (Eigen::Index m = 0; m < 4; ++m) {
    EXPECT_GE(r.weights[1][m], base[m]);
    EXPECT_LT(r.weights[1][m], base[m] * (1.0 + 1e-3));
  }
}

TEST(Reweight, DuplicatesCollapseToOneSensor) {
  const FimAtomSet atoms = duplicates(10);
  const Constraint c{ConstraintKind::MinEig, 1.0, {}};
  bool plain_spread = false;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    ReweightParams p;
    p.seed = seed;
    p.i_max = 0;
    plain_spread = plain_spread || count_selected(reweighted_solve(atoms, c, p).w) >= 2;
    p.i_max = 10;
    const ReweightResult r = reweighted_solve(atoms, c, p);
    EXPECT_EQ(count_selected(r.w), 1u) << "seed " << seed;
    EXPECT_TRUE(is_feasible(atoms, simple_round(r.w), c));
  }
  EXPECT_TRUE(plain_spread);
}

TEST(Reweight, SubgradientInner) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  ReweightParams p;
  p.i_max = 3;
  p.inner = InnerSolver::Subgradient;
  SubgradientParams sp;
  sp.k_max = 300;
  const Constraint c{ConstraintKind::MinEig, 1.0, {}};
  const ReweightResult r = reweighted_solve(atoms, c, p, {}, sp);
  EXPECT_EQ(r.iterates.size(), 4u);
  EXPECT_EQ(r.inner_iterations, 4 * 300);
  EXPECT_FALSE(r.certificate.has_value());
  EXPECT_TRUE(is_feasible(atoms, r.w, c));
}

TEST(Reweight, SeedDeterminism) {
  std::mt19937_64 rng(41);
  const FimAtomSet atoms = assemble_atoms(random_range_scenario(8, 2, rng));
  const Constraint c{ConstraintKind::MinEig, 0.5, {}};
  ReweightParams p;
  p.i_max = 3;
  p.seed = 9;
  EXPECT_EQ(reweighted_solve(atoms, c, p).w, reweighted_solve(atoms, c, p).w);
}

TEST(Reweight, ErrorsNameTheOuterIteration) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  try {
    reweighted_solve(atoms, {ConstraintKind::MinEig, 5.0, {}}, {});
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_NE(std::string(e.what()).find("reweighting iteration 0"), std::string::npos);
  }
}

TEST(Reweight, RejectsBadParameters) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  const Constraint c{ConstraintKind::MinEig, 1.0, {}};
  ReweightParams p;
  p.delta = 0.0;
  EXPECT_THROW(reweighted_solve(atoms, c, p), ConfigError);
  p = {};
  p.i_max = -1;
  EXPECT_THROW(reweighted_solve(atoms, c, p), ConfigError);
  p = {};
  p.tie_break = 1.0;
  EXPECT_THROW(reweighted_solve(atoms, c, p), ConfigError);
  p = {};
  EXPECT_THROW(reweighted_solve(atoms, {ConstraintKind::Trace, 1.0, {}}, p), ConfigError);
}
