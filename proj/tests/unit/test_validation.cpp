#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace sensel;
using sensel::testing::t1_scenario;
using sensel::testing::vec2;

TEST(Validation, SelectedPositions) {
  const Scenario s = t1_scenario();
  Vector w(4);
  w << 1, 0, 1, 0;
  const auto pos = selected_positions(s, w);
  ASSERT_EQ(pos.size(), 2u);
  EXPECT_EQ(pos[1], vec2(-1, 0));
  EXPECT_THROW(selected_positions(s, Vector::Ones(3)), ConfigError);
}

TEST(Validation, NoiselessRangesAndExactRecovery) {
  Scenario s = t1_scenario();
  s.model = RangeModel{0.0, 0.0};
  const Vector theta = vec2(0.2, -0.3);
  const Vector y = simulate_ranges(s, Vector::Ones(4), theta, 1);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(y[i], (theta - s.sensors[i]).norm(), 1e-15);
  const Vector est = gauss_newton_localize(y, s.sensors, vec2(0.05, 0.05), 20);
  EXPECT_NEAR((est - theta).norm(), 0.0, 1e-10);
}

TEST(Validation, RangeNoiseVarianceScalesWithDistance) {
  Scenario s;
  s.sensors = {vec2(0, 0)};
  s.model = RangeModel{0.01, 2.0};
  s.grid = grid_from_points({vec2(3, 0)});
  auto rng = std::mt19937_64(7);
  double sum = 0.0;
  double sum_sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double e = simulate_ranges(s, Vector::Ones(1), vec2(3, 0), rng)[0] - 3.0;
    sum += e;
    sum_sq += e * e;
  }
  const double var = sum_sq / n - (sum / n) * (sum / n);
  EXPECT_NEAR(var, 0.09, 0.09 * 0.05);
}

TEST(Validation, GeometryErrors) {
  const std::vector<Vector> one = {vec2(1, 0)};
  EXPECT_THROW(gauss_newton_localize(Vector::Ones(1), one, vec2(0, 0), 5), GeometryError);
  const std::vector<Vector> collinear = {vec2(1, 0), vec2(2, 0)};
  Vector y(2);
  y << 1, 2;
  EXPECT_THROW(gauss_newton_localize(y, collinear, vec2(0, 0), 5), GeometryError);
  const std::vector<Vector> sensors = {vec2(1, 0), vec2(0, 1)};
  EXPECT_THROW(gauss_newton_localize(y, sensors, vec2(1, 0), 5), GeometryError);
}

TEST(Validation, CrbOfT1) {
  const FimAtomSet atoms = assemble_atoms(t1_scenario());
  const CrbStats s = crb_stats(atoms, Vector::Ones(4));
  EXPECT_NEAR(s.max_root_crb, 1.0, 1e-12);
  EXPECT_NEAR(s.mean_root_crb, 1.0, 1e-12);
  Vector w(4);
  w << 1, 0, 1, 0;
  EXPECT_THROW(crb_stats(atoms, w), InfeasibleError);
}

TEST(Validation, MonteCarloApproachesCrb) {
  Scenario s;
  s.model = RangeModel{1e-4, 0.0};
  for (int i = 0; i < 6; ++i) {
    const double a = i * 2.0 * M_PI / 6.0;
    s.sensors.push_back(vec2(10 * std::cos(a), 10 * std::sin(a)));
  }
  s.grid = grid_from_points({vec2(0, 0), vec2(1, 2)});
  ValidationConfig cfg;
  cfg.trials = 2000;
  cfg.seed = 3;
  const auto pts = monte_carlo_validate(s, Vector::Ones(6), cfg);
  ASSERT_EQ(pts.size(), 2u);
  for (const auto& p : pts) {
    EXPECT_EQ(p.trials, 2000);
    EXPECT_GE(p.rmse, p.root_crb - 3.0 * p.rmse_se);
    EXPECT_LE(p.rmse, 1.1 * p.root_crb);
  }
  const auto again = monte_carlo_validate(s, Vector::Ones(6), cfg);
  EXPECT_EQ(again[1].rmse, pts[1].rmse);
}

TEST(Validation, RejectsNonRangeModels) {
  Scenario s = t1_scenario();
  s.model = BearingModel{1.0};
  EXPECT_THROW(monte_carlo_validate(s, Vector::Ones(4), {}), ConfigError);
}

TEST(Validation, CsvLayout) {
  ValidationPoint p;
  p.theta = vec2(1.5, -2);
  p.root_crb = 0.25;
  p.rmse = 0.5;
  p.trials = 10;
  std::ostringstream out;
  write_validation_csv(out, {p});
  EXPECT_EQ(out.str(), "theta_x,theta_y,root_crb,rmse,trials\n1.5,-2,0.25,0.5,10\n");
}
