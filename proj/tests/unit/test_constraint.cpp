#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace sensel;
using sensel::testing::central_difference;
using sensel::testing::dense_min_eig;
using sensel::testing::random_range_scenario;
using sensel::testing::t1_scenario;

namespace {

Vector random_interior(std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.2, 1.0);
  Vector w(static_cast<Eigen::Index>(m));
  for (auto& x : w) x = uni(rng);
  return w;
}

double value_at(const FimAtomSet& atoms, const Constraint& c, const Vector& w) {
  return eval_constraint(atoms, w, c).value;
}

}  // namespace

TEST(Constraint, T1ValueAtFullSelection) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  const Vector w = Vector::Ones(4);
  EXPECT_NEAR(eval_constraint(atoms, w, {ConstraintKind::MinEig, 1.0, {}}).value, 2.0, 1e-12);
  EXPECT_NEAR(eval_constraint(atoms, w, {ConstraintKind::Trace, 1.0, {}}).value, 1.0, 1e-12);
  EXPECT_NEAR(eval_constraint(atoms, w, {ConstraintKind::LogDet, 0.0, {}}).value,
              std::log(4.0), 1e-12);
}

TEST(Constraint, MinEigGradientIsEigenvectorQuadraticForm) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  Vector w(4);
  w << 1.0, 0.5, 1.0, 0.5;
  const ConstraintEval e = eval_constraint(atoms, w, {ConstraintKind::MinEig, 1.0, {}});
  EXPECT_NEAR(e.value, 1.0, 1e-12);
  ASSERT_TRUE(e.eigvector.has_value());
  EXPECT_NEAR(std::abs((*e.eigvector)[1]), 1.0, 1e-12);
  EXPECT_NEAR(e.gradient[0], 0.0, 1e-12);
  EXPECT_NEAR(e.gradient[1], 1.0, 1e-12);
}

TEST(Constraint, SingularTraceThrowsWithPoint) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  Vector w(4);
  w << 1, 0, 1, 0;
  try {
    eval_constraint(atoms, w, {ConstraintKind::Trace, 1.0, {}});
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    ASSERT_TRUE(e.point().has_value());
    EXPECT_EQ(*e.point(), 0u);
  }
  EXPECT_FALSE(is_feasible(atoms, w, {ConstraintKind::Trace, 1.0, {}}));
  EXPECT_EQ(constraint_margin(atoms, w, {ConstraintKind::LogDet, 0.0, {}}),
            -std::numeric_limits<double>::infinity());
}

TEST(Constraint, PriorRegularizesSingularSelection) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  const Constraint c{ConstraintKind::Trace, 10.0, Matrix::Identity(2, 2)};
  const Vector w = Vector::Zero(4);
  EXPECT_NEAR(eval_constraint(atoms, w, c).value, 2.0, 1e-12);
  EXPECT_TRUE(is_feasible(atoms, w, c));
}

TEST(Constraint, SatisfiesUsesRelativeSlack) {
  const Constraint eig{ConstraintKind::MinEig, 1000.0, {}};
  EXPECT_TRUE(satisfies(eig, 1000.0 - 1e-10));
  EXPECT_FALSE(satisfies(eig, 1000.0 - 1e-6));
  const Constraint tr{ConstraintKind::Trace, 0.5, {}};
  EXPECT_TRUE(satisfies(tr, 0.4));
  EXPECT_FALSE(satisfies(tr, 0.6));
  EXPECT_NEAR(violation(tr, 0.6), 0.1, 1e-15);
  EXPECT_EQ(violation(tr, 0.4), 0.0);
}

TEST(Constraint, Validation) {
  EXPECT_THROW(validate_constraint({ConstraintKind::MinEig, 0.0, {}}, 2), ConfigError);
  EXPECT_THROW(validate_constraint({ConstraintKind::Trace, -1.0, {}}, 2), ConfigError);
  EXPECT_THROW(validate_constraint({ConstraintKind::MinEig, NAN, {}}, 2), ConfigError);
  EXPECT_NO_THROW(validate_constraint({ConstraintKind::LogDet, -3.0, {}}, 2));
  EXPECT_THROW(validate_constraint({ConstraintKind::MinEig, 1.0, Matrix::Identity(3, 3)}, 2),
               ConfigError);
  Matrix asym(2, 2);
  asym << 1, 0.5, 0, 1;
  EXPECT_THROW(validate_constraint({ConstraintKind::MinEig, 1.0, asym}, 2), ConfigError);
  EXPECT_THROW(validate_constraint({ConstraintKind::MinEig, 1.0, -Matrix::Identity(2, 2)}, 2),
               ConfigError);
}

TEST(Constraint, SelectionSizeMismatch) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  EXPECT_THROW(eval_constraint(atoms, Vector::Ones(3), {ConstraintKind::MinEig, 1.0, {}}),
               ConfigError);
}

TEST(ConstraintProperty, MonotoneInSelection) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 0.3);
  for (int trial = 0; trial < 40; ++trial) {
    const FimAtomSet atoms = assemble_atoms(random_range_scenario(8, 3, rng));
    const Vector w = random_interior(8, rng);
    Vector bigger = w;
    for (auto& x : bigger) x = std::min(1.0, x + uni(rng));
    const double eig0 = value_at(atoms, {ConstraintKind::MinEig, 1.0, {}}, w);
    const double eig1 = value_at(atoms, {ConstraintKind::MinEig, 1.0, {}}, bigger);
    EXPECT_GE(eig1, eig0 - 1e-10);
    const double tr0 = value_at(atoms, {ConstraintKind::Trace, 1.0, {}}, w);
    const double tr1 = value_at(atoms, {ConstraintKind::Trace, 1.0, {}}, bigger);
    EXPECT_LE(tr1, tr0 + 1e-10 * tr0);
    const double ld0 = value_at(atoms, {ConstraintKind::LogDet, 0.0, {}}, w);
    const double ld1 = value_at(atoms, {ConstraintKind::LogDet, 0.0, {}}, bigger);
    EXPECT_GE(ld1, ld0 - 1e-10);
  }
}

TEST(ConstraintProperty, MinEigIsConcave) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const Constraint c{ConstraintKind::MinEig, 1.0, {}};
  for (int trial = 0; trial < 40; ++trial) {
    const FimAtomSet atoms = assemble_atoms(random_range_scenario(6, 4, rng));
    const Vector a = random_interior(6, rng);
    const Vector b = random_interior(6, rng);
    const double t = uni(rng);
    const double mid = value_at(atoms, c, t * a + (1 - t) * b);
    EXPECT_GE(mid, t * value_at(atoms, c, a) + (1 - t) * value_at(atoms, c, b) - 1e-10);
  }
}

TEST(ConstraintProperty, MinEigSupergradientInequality) {
  std::mt19937_64 rng(13);
  const Constraint c{ConstraintKind::MinEig, 1.0, {}};
  for (int trial = 0; trial < 40; ++trial) {
    const FimAtomSet atoms = assemble_atoms(random_range_scenario(6, 4, rng));
    const Vector w = random_interior(6, rng);
    const Vector v = random_interior(6, rng);
    const ConstraintEval e = eval_constraint(atoms, w, c);
    EXPECT_LE(value_at(atoms, c, v), e.value + e.gradient.dot(v - w) + 1e-10);
  }
}

TEST(ConstraintProperty, LogDetAndTraceConvexity) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const FimAtomSet atoms = assemble_atoms(random_range_scenario(6, 1, rng));
    const Vector a = random_interior(6, rng);
    const Vector b = random_interior(6, rng);
    const double t = uni(rng);
    const Vector m = t * a + (1 - t) * b;
    const Constraint ld{ConstraintKind::LogDet, 0.0, {}};
    EXPECT_GE(value_at(atoms, ld, m),
              t * value_at(atoms, ld, a) + (1 - t) * value_at(atoms, ld, b) - 1e-10);
    const Constraint tr{ConstraintKind::Trace, 1.0, {}};
    EXPECT_LE(value_at(atoms, tr, m),
              t * value_at(atoms, tr, a) + (1 - t) * value_at(atoms, tr, b) + 1e-10);
  }
}

TEST(ConstraintProperty, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(15);
  for (ConstraintKind kind : {ConstraintKind::MinEig, ConstraintKind::Trace,
                              ConstraintKind::LogDet}) {
    int checked = 0;
    while (checked < 20) {
      const FimAtomSet atoms = assemble_atoms(random_range_scenario(5, 1, rng));
      const Vector w = random_interior(5, rng);
      const Constraint c{kind, 1.0, {}};
      if (kind == ConstraintKind::MinEig) {
        const auto [lo, unused] = dense_min_eig(atoms.weighted_sum(w, 0));
        Eigen::SelfAdjointEigenSolver<Matrix> es(atoms.weighted_sum(w, 0));
        if (es.eigenvalues()[1] - lo <= 1e-3) continue;
      }
      const ConstraintEval e = eval_constraint(atoms, w, c);
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double fd =
            central_difference([&](const Vector& x) { return value_at(atoms, c, x); }, w, i);
        EXPECT_NEAR(e.gradient[i], fd, 1e-5 * std::max(1.0, std::abs(fd)))
            << to_string(kind) << " coordinate " << i;
      }
      ++checked;
    }
  }
}

TEST(ConstraintProperty, WorstPointIsMinimum) {
  std::mt19937_64 rng(16);
  const Constraint c{ConstraintKind::MinEig, 1.0, {}};
  for (int trial = 0; trial < 20; ++trial) {
    const FimAtomSet atoms = assemble_atoms(random_range_scenario(6, 5, rng));
    const Vector w = random_interior(6, rng);
    const ConstraintEval e = eval_constraint(atoms, w, c);
    double expected = std::numeric_limits<double>::infinity();
    for (std::size_t d = 0; d < atoms.points(); ++d) {
      expected = std::min(expected, dense_min_eig(atoms.weighted_sum(w, d)).first);
    }
    EXPECT_NEAR(e.value, expected, 1e-9);
    EXPECT_NEAR(constraint_margin(atoms, w, c), expected - 1.0, 1e-9);
  }
}
