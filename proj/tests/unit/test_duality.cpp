#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace sensel;
using sensel::testing::enumerate_min_card;
using sensel::testing::random_range_scenario;
using sensel::testing::t1_scenario;

TEST(Duality, HandBuiltT1CertificateIsTight) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  DualCertificate cert;
  cert.z = {Matrix::Identity(2, 2)};
  cert.mu = Vector::Zero(4);
  cert.threshold = 1.0;
  cert.weights = Vector::Ones(4);
  EXPECT_TRUE(check_dual_feasible(cert, atoms));
  EXPECT_NEAR(dual_bound(cert), 2.0, 1e-15);
}

TEST(Duality, BoundAccountsForPriorAndMu) {
  DualCertificate cert;
  cert.z = {Matrix::Identity(2, 2)};
  cert.mu = Vector::Constant(4, 0.25);
  cert.threshold = 1.0;
  cert.prior = 0.5 * Matrix::Identity(2, 2);
  EXPECT_NEAR(dual_bound(cert), 2.0 - 1.0 - 1.0, 1e-15);
}

TEST(Duality, DetectsInfeasibleCertificates) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  DualCertificate cert;
  cert.z = {2.0 * Matrix::Identity(2, 2)};
  cert.mu = Vector::Zero(4);
  cert.threshold = 1.0;
  cert.weights = Vector::Ones(4);
  EXPECT_FALSE(check_dual_feasible(cert, atoms));
  cert.mu = Vector::Ones(4);
  EXPECT_TRUE(check_dual_feasible(cert, atoms));
  cert.mu[0] = -1.0;
  EXPECT_FALSE(check_dual_feasible(cert, atoms));
  cert.mu = Vector::Ones(4);
  cert.z = {-Matrix::Identity(2, 2)};
  EXPECT_FALSE(check_dual_feasible(cert, atoms));
  cert.z = {};
  EXPECT_FALSE(check_dual_feasible(cert, atoms));
}

TEST(Duality, BarrierCertificateIsFeasible) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  const Constraint c{ConstraintKind::MinEig, 1.0, {}};
  const DualCertificate cert = certificate_from_barrier(Vector::Ones(4), atoms, c, 1.0);
  EXPECT_TRUE(check_dual_feasible(cert, atoms));
  // S - I = I, Z = I; every sensor sees tr(F Z) = 1, so mu = 0.
  EXPECT_NEAR(cert.bound, 2.0, 1e-12);
  EXPECT_NEAR(cert.mu.norm(), 0.0, 1e-12);
}

TEST(Duality, WeakDualityOnRandomInstances) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int checked = 0;
  while (checked < 10) {
    const FimAtomSet atoms = assemble_atoms(random_range_scenario(7, 3, rng));
    const Constraint c{ConstraintKind::MinEig, 1.0, {}};
    if (!(eval_constraint(atoms, Vector::Ones(7), c).value > 1.0)) continue;
    ++checked;
    Vector w = Vector::Ones(7);
    for (auto& x : w) x = 0.7 + 0.3 * uni(rng);
    if (!(eval_constraint(atoms, w, c).value > 1.0)) w = Vector::Ones(7);
    const DualCertificate cert = certificate_from_barrier(w, atoms, c, 0.5 + uni(rng));
    EXPECT_TRUE(check_dual_feasible(cert, atoms));
    const auto opt = enumerate_min_card(atoms, 1.0);
    ASSERT_TRUE(opt.has_value());
    EXPECT_LE(cert.bound, *opt + 1e-8);
    EXPECT_LE(cert.bound, w.sum() + 1e-8);
  }
}

TEST(Duality, RejectsInvalidInputs) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  const Constraint c{ConstraintKind::MinEig, 1.0, {}};
  EXPECT_THROW(certificate_from_barrier(Vector::Ones(4), atoms, c, 0.0), ConfigError);
  EXPECT_THROW(certificate_from_barrier(Vector::Ones(3), atoms, c, 1.0), ConfigError);
  EXPECT_THROW(
      certificate_from_barrier(Vector::Ones(4), atoms, {ConstraintKind::Trace, 1.0, {}}, 1.0),
      ConfigError);
  Vector w(4);
  w << 1, 0, 1, 0;
  try {
    certificate_from_barrier(w, atoms, c, 1.0);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.point().value_or(99), 0u);
  }
}
