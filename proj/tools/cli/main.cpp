#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "sensel/harness/run.hpp"

namespace {

using namespace sensel;
using namespace sensel::harness;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  bool soft = false;
  std::optional<std::string> solver;
  std::optional<int> reweight;
  std::string out = "out";
};

void add_common(CLI::App* cmd, Overrides& o, bool solve_flags) {
  cmd->add_option("--config", o.config, "Scenario file (YAML)")->required();
  cmd->add_option("--out", o.out, "Output directory");
  if (!solve_flags) return;
  cmd->add_option("--seed", o.seed, "Random seed (default: config value or 0)");
  cmd->add_flag("--soft", o.soft, "Report the relaxed selection only (no rounding)");
  cmd->add_option("--solver", o.solver, "Relaxed solver")
      ->check(CLI::IsMember({"subgradient", "barrier"}));
  cmd->add_option("--reweight", o.reweight, "Sparsity-enhancing outer iterations i_max");
}

RunConfig resolve(const Overrides& o) {
  RunConfig config = load_config(o.config);
  if (o.seed) config.seed = *o.seed;
  if (o.soft) config.soft = true;
  if (o.solver) config.solver = parse_inner_solver(*o.solver);
  if (o.reweight) config.reweight_iterations = *o.reweight;
  return config;
}

void write_json(const std::filesystem::path& dir, const char* name, const nlohmann::json& j) {
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / name);
  if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
  f << j.dump(2) << '\n';
}

void print_summary(const RunReport& report) {
  std::cout << "relaxed objective " << std::setprecision(8) << report.relaxed_objective << '\n';
  if (report.w_boolean) {
    std::cout << "selected " << report.cardinality << " of " << report.w_relaxed.size() << ":";
    for (std::size_t m : selected_indices(*report.w_boolean)) std::cout << ' ' << m;
    std::cout << '\n';
  } else {
    std::cout << "relaxed support " << report.cardinality << " of " << report.w_relaxed.size()
              << '\n';
  }
  if (report.dual) {
    std::cout << "dual bound " << report.dual->bound << ", gap " << report.dual->gap << '\n';
  }
  if (report.crb) {
    std::cout << "root-CRB max " << report.crb->max_root_crb << ", mean "
              << report.crb->mean_root_crb << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-cardinality sensor selection under accuracy constraints"};
  app.require_subcommand(1);

  Overrides select_opts;
  auto* select = app.add_subcommand("select", "Solve, round and certify a selection");
  add_common(select, select_opts, true);

  Overrides sweep_opts;
  std::vector<double> radii;
  auto* sweep = app.add_subcommand("sweep", "Selection path over a list of accuracy radii");
  add_common(sweep, sweep_opts, true);
  sweep->add_option("--radii", radii, "Radii R_e (overrides sweep.radii)")->delimiter(',');

  Overrides oracle_opts;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive minimum-cardinality search (M <= 20)");
  add_common(oracle, oracle_opts, false);

  Overrides validate_opts;
  std::optional<int> trials;
  auto* validate = app.add_subcommand("validate", "Select, then compare Gauss-Newton RMSE with the root-CRB");
  add_common(validate, validate_opts, true);
  validate->add_option("--trials", trials, "Monte-Carlo trials per grid point");

  Overrides dist_opts;
  std::optional<std::string> topology;
  std::optional<int> rounds;
  std::optional<int> k_max;
  auto* distributed = app.add_subcommand("distributed", "Simulated distributed subgradient run");
  add_common(distributed, dist_opts, false);
  distributed->add_option("--topology", topology, "ring, complete or an edge-list file");
  distributed->add_option("--rounds", rounds, "Gossip rounds per iteration");
  distributed->add_option("--k-max", k_max, "Subgradient iterations");

  double radius = 0.0;
  double probability = 0.0;
  int dim = 2;
  std::optional<double> mean_radius;
  auto* thr = app.add_subcommand("thresholds", "Print the accuracy thresholds for (R_e, P_e)");
  thr->add_option("--radius", radius, "Accuracy radius R_e [m]")->required();
  thr->add_option("--probability", probability, "Probability P_e")->required();
  thr->add_option("--dim", dim, "Parameter dimension N");
  thr->add_option("--mean-radius", mean_radius, "Mean radius for the determinant measure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*select) {
      const RunConfig config = resolve(select_opts);
      const RunReport report = run(config, &std::cout);
      emit_outputs(report, select_opts.out);
      print_summary(report);
    } else if (*sweep) {
      RunConfig config = resolve(sweep_opts);
      if (!radii.empty()) config.sweep_radii = radii;
      const auto rows = run_sweep(config);
      std::filesystem::create_directories(sweep_opts.out);
      std::ofstream f(std::filesystem::path(sweep_opts.out) / "sweep.csv");
      write_sweep_csv(f, rows);
      write_sweep_csv(std::cout, rows);
    } else if (*oracle) {
      const RunConfig config = resolve(oracle_opts);
      const OracleResult result = run_oracle(config);
      nlohmann::json j = {{"feasible", result.w.has_value()},
                          {"subsets_checked", result.subsets_checked}};
      if (result.w) {
        j["cardinality"] = result.cardinality;
        j["indices"] = selected_indices(*result.w);
        std::cout << "minimum cardinality " << result.cardinality << ":";
        for (std::size_t m : selected_indices(*result.w)) std::cout << ' ' << m;
        std::cout << '\n';
      }
      write_json(oracle_opts.out, "oracle.json", j);
      if (!result.w) {
        std::cerr << "error: even the full selection violates the constraint\n";
        return kExitInfeasible;
      }
    } else if (*validate) {
      RunConfig config = resolve(validate_opts);
      config.validate = true;
      if (trials) config.validation.trials = *trials;
      const RunReport report = run(config, &std::cout);
      emit_outputs(report, validate_opts.out);
      print_summary(report);
    } else if (*distributed) {
      RunConfig config = resolve(dist_opts);
      if (topology) config.distributed.topology = *topology;
      if (rounds) config.distributed.rounds = *rounds;
      if (k_max) config.distributed.k_max = *k_max;
      const DistributedResult result = run_distributed_config(config);
      const nlohmann::json j = distributed_to_json(result);
      write_json(dist_opts.out, "distributed.json", j);
      std::cout << "distributed objective " << result.objective << ", centralized "
                << result.centralized_objective << ", divergence events "
                << result.divergence_events << '\n';
    } else if (*thr) {
      AccuracySpec spec{radius, probability, dim, mean_radius, std::nullopt};
      std::cout << std::setprecision(10);
      std::cout << "lambda_eig " << thresholds(spec, ConstraintKind::MinEig) << '\n';
      std::cout << "lambda_tr " << thresholds(spec, ConstraintKind::Trace) << '\n';
      std::cout << "lambda_det " << thresholds(spec, ConstraintKind::LogDet) << '\n';
      std::cout << "xi " << chi2_quantile(probability, dim) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitOk;
}
