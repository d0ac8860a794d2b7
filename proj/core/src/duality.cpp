#include "sensel/duality.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "sensel/errors.hpp"
#include "sensel/subgradient.hpp"

namespace sensel {

double dual_bound(const DualCertificate& cert) {
  double bound = 0.0;
  for (const Matrix& z : cert.z) {
    bound += cert.threshold * z.trace();
    if (cert.prior) bound -= z.cwiseProduct(*cert.prior).sum();
  }
  return bound - (cert.mu.size() > 0 ? cert.mu.sum() : 0.0);
}

bool check_dual_feasible(const DualCertificate& cert, const FimAtomSet& atoms, double tol) {
  const auto m_count = static_cast<Eigen::Index>(atoms.sensors());
  if (cert.z.size() != atoms.points() || cert.mu.size() != m_count ||
      cert.weights.size() != m_count) {
    return false;
  }
  if ((cert.mu.array() < 0.0).any()) return false;
  for (const Matrix& z : cert.z) {
    if (!z.allFinite()) return false;
    const double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (z + z.transpose()), Eigen::EigenvaluesOnly);
    if (solver.eigenvalues()[0] < -1e-10 * scale) return false;
  }
  for (Eigen::Index m = 0; m < m_count; ++m) {
    double lhs = 0.0;
    for (std::size_t d = 0; d < atoms.points(); ++d) {
      lhs += atoms(static_cast<std::size_t>(m), d).cwiseProduct(cert.z[d]).sum();
    }
    if (lhs > cert.weights[m] + cert.mu[m] + tol) return false;
  }
  return true;
}

DualCertificate certificate_from_barrier(const Selection& w, const FimAtomSet& atoms,
                                         const Constraint& c, double t,
                                         const std::optional<Vector>& weights) {
  if (c.kind != ConstraintKind::MinEig) {
    throw ConfigError("dual certificates are only available for the min_eig constraint");
  }
  if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("barrier parameter t must be positive");
  if (static_cast<std::size_t>(w.size()) != atoms.sensors()) {
    throw ConfigError("selection size does not match the number of sensors");
  }

  DualCertificate cert;
  cert.threshold = c.threshold;
  cert.prior = c.prior;
  cert.weights = objective_weights(weights, atoms.sensors());
  const auto n = static_cast<Eigen::Index>(atoms.dim());
  const Matrix shift = c.threshold * Matrix::Identity(n, n);

  cert.z.reserve(atoms.points());
  for (std::size_t d = 0; d < atoms.points(); ++d) {
    const Matrix s = atoms.weighted_sum(w, d, c.prior ? &*c.prior : nullptr) - shift;
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() != Eigen::Success) {
      throw InfeasibleError("selection is not strictly feasible at grid point " + std::to_string(d),
                            d);
    }
    Matrix z = llt.solve(Matrix::Identity(n, n)) / t;
    cert.z.push_back(0.5 * (z + z.transpose()));
  }

  const auto m_count = static_cast<Eigen::Index>(atoms.sensors());
  cert.mu = Vector::Zero(m_count);
  for (Eigen::Index m = 0; m < m_count; ++m) {
    double lhs = 0.0;
    for (std::size_t d = 0; d < atoms.points(); ++d) {
      lhs += atoms(static_cast<std::size_t>(m), d).cwiseProduct(cert.z[d]).sum();
    }
    cert.mu[m] = std::max(0.0, lhs - cert.weights[m]);
  }
  cert.bound = dual_bound(cert);
  return cert;
}

}  // namespace sensel
