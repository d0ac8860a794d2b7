#include "sensel/errors.hpp"

namespace sensel {

namespace {

std::string singularity_message(std::size_t sensor, std::optional<std::size_t> point) {
  std::string msg = "sensor " + std::to_string(sensor) + " coincides with ";
  msg += point ? "grid point " + std::to_string(*point) : std::string("the evaluation point");
  return msg + " (zero distance)";
}

}  // namespace

SingularityError::SingularityError(std::size_t sensor, std::optional<std::size_t> point)
    : Error(singularity_message(sensor, point)), sensor_(sensor), point_(point) {}

}  // namespace sensel
