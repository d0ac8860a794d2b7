#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sensel/sensel.hpp"

namespace sensel::harness {

struct DistributedConfig {
  /// "ring", "complete" or a path to an edge-list file.
  std::string topology = "ring";
  int rounds = 10;
  int k_max = 200;
};

/// Everything a pipeline run needs, resolved from the scenario file and the
/// command line.
struct RunConfig {
  std::filesystem::path source;
  Scenario scenario;
  std::optional<Matrix> prior;

  ConstraintKind kind = ConstraintKind::MinEig;
  /// Explicit threshold; takes precedence over `accuracy`.
  std::optional<double> threshold;
  std::optional<AccuracySpec> accuracy;

  InnerSolver solver = InnerSolver::Barrier;
  SubgradientParams subgradient;
  BarrierParams barrier;
  int reweight_iterations = 0;
  double reweight_delta = 1e-8;
  double reweight_tie_break = 1e-9;
  RoundingParams rounding;
  bool soft = false;
  std::uint64_t seed = 0;

  bool validate = false;
  ValidationConfig validation;

  DistributedConfig distributed;
  std::vector<double> sweep_radii;
};

/// Parses a YAML scenario file. Unknown keys, missing sections and
/// out-of-range values raise ConfigError naming the offending key.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::filesystem::path& source = {});

/// Explicit threshold, or the one derived from the accuracy requirement.
double resolve_threshold(const RunConfig& config);

Constraint make_constraint(const RunConfig& config);

}  // namespace sensel::harness
