#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <string>

#include <Eigen/Core>

namespace sensel {

/// Base of every error raised by the toolkit. The message can be prefixed
/// while the exception propagates (e.g. with a stage or outer-loop index)
/// without losing the dynamic type.
class Error : public std::exception {
 public:
  explicit Error(std::string message) : message_(std::move(message)) {}

  const char* what() const noexcept override { return message_.c_str(); }

  void prepend(const std::string& context) { message_ = context + ": " + message_; }

 private:
  std::string message_;
};

/// Invalid configuration or violated precondition on user input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A localization model was evaluated where a sensor coincides with a grid point.
class SingularityError : public Error {
 public:
  SingularityError(std::size_t sensor, std::optional<std::size_t> point);

  std::size_t sensor() const { return sensor_; }
  std::optional<std::size_t> point() const { return point_; }

 private:
  std::size_t sensor_;
  std::optional<std::size_t> point_;
};

/// The constraint cannot be met (singular information matrix, infeasible start, ...).
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(std::string message, std::optional<std::size_t> point = std::nullopt)
      : Error(std::move(message)), point_(point) {}

  std::optional<std::size_t> point() const { return point_; }

 private:
  std::optional<std::size_t> point_;
};

/// Numerical breakdown. Carries the iterate at which it happened, when one exists.
class NumericalError : public Error {
 public:
  explicit NumericalError(std::string message, Eigen::VectorXd iterate = {})
      : Error(std::move(message)), iterate_(std::move(iterate)) {}

  const Eigen::VectorXd& iterate() const { return iterate_; }

 private:
  Eigen::VectorXd iterate_;
};

/// Power iteration ran out of iterations. Holds the best eigenpair estimate.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(std::string message, double value, Eigen::VectorXd vector)
      : NumericalError(std::move(message), vector), value_(value) {}

  double value() const { return value_; }
  const Eigen::VectorXd& vector() const { return iterate(); }

 private:
  double value_;
};

/// Zero subgradient at an infeasible iterate: the constraint cannot be reached.
class StallError : public NumericalError {
 public:
  StallError(std::string message, int iteration, Eigen::VectorXd iterate)
      : NumericalError(std::move(message), std::move(iterate)), iteration_(iteration) {}

  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// Rank-deficient Gauss-Newton normal equations.
class GeometryError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// No feasible Boolean candidate was drawn within the batch budget.
class RoundingError : public Error {
 public:
  RoundingError(std::string message, double best_margin, Eigen::VectorXd best_candidate)
      : Error(std::move(message)),
        best_margin_(best_margin),
        best_candidate_(std::move(best_candidate)) {}

  double best_margin() const { return best_margin_; }
  const Eigen::VectorXd& best_candidate() const { return best_candidate_; }

 private:
  double best_margin_;
  Eigen::VectorXd best_candidate_;
};

}  // namespace sensel
