#include "sensel/thresholds.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sensel/errors.hpp"

namespace sensel {

std::string_view to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::MinEig:
      return "min_eig";
    case ConstraintKind::Trace:
      return "trace";
    case ConstraintKind::LogDet:
      return "log_det";
  }
  return "unknown";
}

ConstraintKind parse_constraint_kind(std::string_view text) {
  if (text == "min_eig" || text == "eig") return ConstraintKind::MinEig;
  if (text == "trace") return ConstraintKind::Trace;
  if (text == "log_det" || text == "logdet") return ConstraintKind::LogDet;
  throw ConfigError("unknown constraint kind '" + std::string(text) +
                    "' (expected min_eig, trace or log_det)");
}

namespace {

void check_spec(const AccuracySpec& spec) {
  if (!(std::isfinite(spec.radius) && spec.radius > 0.0)) {
    throw ConfigError("accuracy radius R_e must be positive");
  }
  if (!(spec.probability > 0.0 && spec.probability < 1.0)) {
    throw ConfigError("accuracy probability P_e must lie in (0, 1)");
  }
  if (spec.dim < 1) throw ConfigError("parameter dimension must be positive");
}

// Series expansion, valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) (modified Lentz), valid for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw ConfigError("regularized_gamma_p: a must be positive");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double chi2_quantile(double probability, int dof) {
  if (!(probability > 0.0 && probability < 1.0)) {
    throw ConfigError("chi2_quantile: probability must lie in (0, 1)");
  }
  if (dof < 1) throw ConfigError("chi2_quantile: degrees of freedom must be positive");
  if (dof == 2) return -2.0 * std::log1p(-probability);

  const double a = 0.5 * dof;
  auto cdf = [a](double x) { return regularized_gamma_p(a, 0.5 * x); };
  double lo = 0.0;
  double hi = static_cast<double>(dof);
  while (cdf(hi) < probability) hi *= 2.0;
  while (hi - lo > 1e-10 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < probability ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double thresholds(const AccuracySpec& spec, ConstraintKind kind) {
  check_spec(spec);
  const double n = spec.dim;
  const double r2 = spec.radius * spec.radius;
  switch (kind) {
    case ConstraintKind::MinEig:
      return n / r2 / (1.0 - spec.probability);
    case ConstraintKind::Trace:
      return (1.0 - spec.probability) * r2;
    case ConstraintKind::LogDet: {
      const double mean_radius = spec.mean_radius.value_or(spec.radius);
      if (!(std::isfinite(mean_radius) && mean_radius > 0.0)) {
        throw ConfigError("mean radius must be positive");
      }
      const double xi = spec.xi.value_or(chi2_quantile(spec.probability, spec.dim));
      if (!(xi > 0.0)) throw ConfigError("chi-squared quantile xi must be positive");
      return 2.0 * n * std::log(std::sqrt(xi) / mean_radius);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace sensel
