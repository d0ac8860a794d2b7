#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sensel/harness/config.hpp"

namespace sensel::harness {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitInfeasible = 3,
  kExitNumerical = 4,
  kExitRounding = 5,
};

/// Maps an exception to the CLI exit code.
int exit_code_for(const std::exception& e);

struct DualSummary {
  /// u^T w for the objective weights of the certified (last) solve.
  double weighted_objective = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  double t = 0.0;
  bool feasible = false;
};

struct RunReport {
  RunConfig config;
  double threshold = 0.0;
  Selection w_relaxed;
  double relaxed_objective = 0.0;
  std::optional<Selection> w_boolean;
  std::size_t cardinality = 0;
  int rounding_batch = 0;
  /// Per grid point, for the Boolean selection (relaxed one in soft mode).
  Vector margins;
  std::optional<DualSummary> dual;
  int outer_iterations = 0;
  int inner_iterations = 0;
  SolverTrace trace;
  std::optional<CrbStats> crb;
  std::vector<ValidationPoint> validation;
};

/// assemble -> thresholds -> (reweighted) solve -> round -> certify ->
/// validate. Errors are rethrown with the stage name prepended. The derived
/// threshold is written to `log` before solving.
RunReport run(const RunConfig& config, std::ostream* log = nullptr);

nlohmann::json report_to_json(const RunReport& report);
void write_selection_csv(std::ostream& out, const RunReport& report);
void write_placement_svg(std::ostream& out, const RunReport& report);

/// Writes selection.csv, report.json, placement.svg and, when validation
/// ran, validation.csv into `dir` (created if needed).
void emit_outputs(const RunReport& report, const std::filesystem::path& dir);

struct SweepRow {
  double radius = 0.0;
  double threshold = 0.0;
  double relaxed_objective = 0.0;
  std::size_t cardinality = 0;
  std::vector<std::size_t> selected;
};

/// One run per radius of config.sweep_radii (concurrently), in input order.
std::vector<SweepRow> run_sweep(const RunConfig& config);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Brute-force minimum cardinality for the configured constraint.
OracleResult run_oracle(const RunConfig& config);

Topology load_topology(const std::string& spec, std::size_t nodes);
DistributedResult run_distributed_config(const RunConfig& config);
nlohmann::json distributed_to_json(const DistributedResult& result);

std::vector<std::size_t> selected_indices(const Selection& w, double threshold = 0.5);

}  // namespace sensel::harness
