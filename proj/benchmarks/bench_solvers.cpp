#include <cmath>
#include <random>

#include <benchmark/benchmark.h>

#include "sensel/sensel.hpp"

using namespace sensel;

namespace {

/// Range instance with M sensors on a circle of radius 20 around a D-point
/// line of targets.
FimAtomSet ring_instance(int m, int d) {
  Scenario s;
  s.model = RangeModel{1e-2, 0.0};
  for (int i = 0; i < m; ++i) {
    Vector p(2);
    const double a = 2.0 * 3.141592653589793 * i / m + 0.1;
    p << 20.0 * std::cos(a), 20.0 * std::sin(a);
    s.sensors.push_back(p);
  }
  std::vector<Vector> pts;
  for (int j = 0; j < d; ++j) {
    Vector p(2);
    p << j, 0.5 * j;
    pts.push_back(p);
  }
  s.grid = grid_from_points(pts);
  return assemble_atoms(s);
}

Constraint half_of_full(const FimAtomSet& atoms) {
  const Vector ones = Vector::Ones(static_cast<Eigen::Index>(atoms.sensors()));
  const double full = eval_constraint(atoms, ones, {ConstraintKind::MinEig, 1.0, {}}).value;
  return {ConstraintKind::MinEig, 0.5 * full, {}};
}

void BM_PowerMinEig(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  const Matrix s = a * a.transpose() + Matrix::Identity(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(power_min_eig(s, {1e-10, 1000000}));
}
BENCHMARK(BM_PowerMinEig)->Arg(4)->Arg(8)->Arg(16);

void BM_EvalConstraint(benchmark::State& state) {
  const FimAtomSet atoms = ring_instance(80, static_cast<int>(state.range(0)));
  const Vector w = Vector::Constant(80, 0.5);
  const Constraint c{ConstraintKind::MinEig, 1.0, {}};
  for (auto _ : state) benchmark::DoNotOptimize(eval_constraint(atoms, w, c));
}
BENCHMARK(BM_EvalConstraint)->Arg(10)->Arg(100);

void BM_Subgradient(benchmark::State& state) {
  const FimAtomSet atoms = ring_instance(static_cast<int>(state.range(0)), 10);
  const Constraint c = half_of_full(atoms);
  for (auto _ : state) benchmark::DoNotOptimize(projected_subgradient(atoms, c));
}
BENCHMARK(BM_Subgradient)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_Barrier(benchmark::State& state) {
  const FimAtomSet atoms = ring_instance(static_cast<int>(state.range(0)), 10);
  const Constraint c = half_of_full(atoms);
  for (auto _ : state) benchmark::DoNotOptimize(barrier_newton(atoms, c));
}
BENCHMARK(BM_Barrier)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_RandomizedRound(benchmark::State& state) {
  const FimAtomSet atoms = ring_instance(80, 10);
  const Constraint c = half_of_full(atoms);
  const Selection relaxed = barrier_newton(atoms, c).w;
  for (auto _ : state) benchmark::DoNotOptimize(randomized_round(relaxed, atoms, c));
}
BENCHMARK(BM_RandomizedRound)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
