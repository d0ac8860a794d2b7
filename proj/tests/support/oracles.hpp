#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sensel/sensel.hpp"

namespace sensel::testing {

/// Smallest eigenpair from a dense symmetric eigensolver.
inline std::pair<double, Vector> dense_min_eig(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (s + s.transpose()));
  return {solver.eigenvalues()[0], solver.eigenvectors().col(0)};
}

inline Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

/// The four-sensor range instance around the origin.
inline Scenario t1_scenario() {
  Scenario s;
  s.sensors = {vec2(1, 0), vec2(0, 1), vec2(-1, 0), vec2(0, -1)};
  s.model = RangeModel{1.0, 0.0};
  s.grid = grid_from_points({vec2(0, 0)});
  return s;
}

/// Random symmetric PSD matrix with eigenvalues in [0, 1] and every gap at
/// least `gap`, built as Q diag(ev) Q^T with a random orthogonal Q.
inline Matrix random_psd(int n, double gap, std::mt19937_64& rng, Vector* eigenvalues = nullptr) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> normal;
  Vector ev(n);
  while (true) {
    for (int i = 0; i < n; ++i) ev[i] = uni(rng);
    std::sort(ev.data(), ev.data() + n);
    bool ok = true;
    for (int i = 1; i < n; ++i) ok = ok && ev[i] - ev[i - 1] >= gap;
    if (ok) break;
  }
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix q = qr.householderQ();
  if (eigenvalues) *eigenvalues = ev;
  return q * ev.asDiagonal() * q.transpose();
}

/// Random range-model instance: M sensors uniform in [-5, 5]^2 and D grid
/// points uniform in [-1, 1]^2.
inline Scenario random_range_scenario(int m, int d, std::mt19937_64& rng, double sigma2 = 1.0,
                                      double eta = 0.0) {
  std::uniform_real_distribution<double> sensor(-5.0, 5.0);
  std::uniform_real_distribution<double> point(-1.0, 1.0);
  Scenario s;
  s.model = RangeModel{sigma2, eta};
  for (int i = 0; i < m; ++i) s.sensors.push_back(vec2(sensor(rng), sensor(rng)));
  std::vector<Vector> pts;
  for (int i = 0; i < d; ++i) pts.push_back(vec2(point(rng), point(rng)));
  s.grid = grid_from_points(pts);
  return s;
}

/// Minimum cardinality by plain bitmask enumeration, judged with a dense
/// eigensolver at every grid point. Returns nothing when the full set fails.
inline std::optional<int> enumerate_min_card(const FimAtomSet& atoms, double lambda) {
  const int m = static_cast<int>(atoms.sensors());
  std::optional<int> best;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    const int card = __builtin_popcount(mask);
    if (best && card >= *best) continue;
    Vector w = Vector::Zero(m);
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) w[i] = 1.0;
    }
    bool ok = true;
    for (std::size_t d = 0; d < atoms.points() && ok; ++d) {
      ok = dense_min_eig(atoms.weighted_sum(w, d)).first >= lambda * (1.0 - 1e-12);
    }
    if (ok) best = card;
  }
  return best;
}

/// Central difference of f along coordinate i.
template <typename F>
double central_difference(F&& f, const Vector& w, Eigen::Index i, double h = 1e-6) {
  Vector plus = w;
  Vector minus = w;
  plus[i] += h;
  minus[i] -= h;
  return (f(plus) - f(minus)) / (2.0 * h);
}

}  // namespace sensel::testing
