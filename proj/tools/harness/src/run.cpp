#include "sensel/harness/run.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace sensel::harness {

namespace {

template <typename F>
auto stage(const char* name, F&& body) {
  try {
    return body();
  } catch (Error& e) {
    e.prepend(name);
    throw;
  }
}

std::string fmt(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

nlohmann::json to_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

/// Boolean selection, or the support of the relaxed one in soft mode.
Selection reported_selection(const RunReport& report) {
  if (report.w_boolean) return *report.w_boolean;
  return (report.w_relaxed.array() > 1e-6).cast<double>().matrix();
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const RoundingError*>(&e)) return kExitRounding;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const SingularityError*>(&e)) {
    return kExitConfig;
  }
  if (dynamic_cast<const InfeasibleError*>(&e) || dynamic_cast<const StallError*>(&e)) {
    return kExitInfeasible;
  }
  if (dynamic_cast<const NumericalError*>(&e)) return kExitNumerical;
  return kExitFailure;
}

std::vector<std::size_t> selected_indices(const Selection& w, double threshold) {
  std::vector<std::size_t> out;
  for (Eigen::Index m = 0; m < w.size(); ++m) {
    if (w[m] > threshold) out.push_back(static_cast<std::size_t>(m));
  }
  return out;
}

RunReport run(const RunConfig& config, std::ostream* log) {
  RunReport report;
  report.config = config;
  const FimAtomSet atoms = stage("assemble", [&] { return assemble_atoms(config.scenario); });
  const Constraint c = stage("thresholds", [&] { return make_constraint(config); });
  report.threshold = c.threshold;
  if (log) {
    *log << "threshold " << to_string(c.kind) << " = " << std::setprecision(10) << c.threshold
         << '\n';
  }

  const ReweightResult solved = stage("solve", [&] {
    ReweightParams params;
    params.i_max = config.reweight_iterations;
    params.delta = config.reweight_delta;
    params.inner = config.solver;
    params.tie_break = config.reweight_tie_break;
    params.seed = config.seed;
    return reweighted_solve(atoms, c, params, config.barrier, config.subgradient);
  });
  report.w_relaxed = solved.w;
  report.relaxed_objective = solved.w.sum();
  report.outer_iterations = config.reweight_iterations + 1;
  report.inner_iterations = solved.inner_iterations;
  report.trace = solved.trace;

  if (config.soft) {
    report.cardinality = count_selected(solved.w);
  } else {
    const RoundingResult rounded = stage("round", [&] {
      RoundingParams params = config.rounding;
      params.seed = config.seed;
      return randomized_round(solved.w, atoms, c, params);
    });
    report.w_boolean = rounded.w;
    report.cardinality = rounded.cardinality;
    report.rounding_batch = rounded.batch;
  }
  report.margins = constraint_margins(atoms, report.w_boolean ? *report.w_boolean : solved.w, c);

  if (solved.certificate) {
    report.dual = DualSummary{solved.certificate->weights.dot(solved.w), solved.certificate->bound,
                              solved.gap, solved.t, check_dual_feasible(*solved.certificate, atoms)};
  }

  if (config.validate) {
    stage("validate", [&] {
      if (!report.w_boolean) throw ConfigError("validation needs a Boolean selection (no --soft)");
      report.crb = crb_stats(atoms, *report.w_boolean, config.prior);
      if (std::holds_alternative<RangeModel>(config.scenario.model)) {
        ValidationConfig vc = config.validation;
        vc.seed = config.seed;
        report.validation = monte_carlo_validate(config.scenario, *report.w_boolean, vc);
      }
      return 0;
    });
  }
  return report;
}

nlohmann::json report_to_json(const RunReport& report) {
  using nlohmann::json;
  const RunConfig& cfg = report.config;
  json out;
  out["seed"] = cfg.seed;
  out["soft"] = cfg.soft;
  out["scenario"] = {{"source", cfg.source.string()},
                     {"model", std::string(model_name(cfg.scenario.model))},
                     {"sensors", cfg.scenario.sensor_count()},
                     {"grid_points", cfg.scenario.grid.size()},
                     {"dim", cfg.scenario.dim}};
  json constraint = {{"kind", std::string(to_string(cfg.kind))}, {"threshold", report.threshold}};
  if (cfg.accuracy && !cfg.threshold) {
    constraint["radius"] = cfg.accuracy->radius;
    constraint["probability"] = cfg.accuracy->probability;
  }
  out["constraint"] = constraint;
  out["solver"] = {{"name", std::string(to_string(cfg.solver))},
                   {"reweight_iterations", cfg.reweight_iterations},
                   {"delta", cfg.reweight_delta},
                   {"rounding_candidates", cfg.rounding.candidates},
                   {"rounding_max_batches", cfg.rounding.max_batches}};
  out["relaxed"] = {{"w", to_json(report.w_relaxed)},
                    {"objective", report.relaxed_objective},
                    {"cardinality", count_selected(report.w_relaxed)}};
  if (report.w_boolean) {
    out["boolean"] = {{"w", to_json(*report.w_boolean)},
                      {"cardinality", report.cardinality},
                      {"indices", selected_indices(*report.w_boolean)},
                      {"batch", report.rounding_batch}};
  }
  out["cardinality"] = report.cardinality;
  out["margins"] = to_json(report.margins);
  if (report.dual) {
    out["dual"] = {{"weighted_objective", report.dual->weighted_objective},
                   {"bound", report.dual->bound},
                   {"gap", report.dual->gap},
                   {"t", report.dual->t},
                   {"feasible", report.dual->feasible}};
  } else {
    out["dual"] = nullptr;
  }
  out["iterations"] = {{"outer", report.outer_iterations}, {"inner", report.inner_iterations}};
  json trace = json::array();
  for (const IterationRecord& r : report.trace) {
    trace.push_back({{"k", r.k},
                     {"objective", r.objective},
                     {"constraint_value", r.constraint_value},
                     {"feasible", r.feasible},
                     {"step", r.step}});
  }
  out["trace"] = trace;
  if (report.crb) {
    out["crb"] = {{"max", report.crb->max_root_crb},
                  {"mean", report.crb->mean_root_crb},
                  {"per_point", to_json(report.crb->per_point)}};
  }
  if (!report.validation.empty()) {
    json points = json::array();
    for (const ValidationPoint& p : report.validation) {
      points.push_back({{"theta_x", p.theta[0]},
                        {"theta_y", p.theta.size() > 1 ? p.theta[1] : 0.0},
                        {"root_crb", p.root_crb},
                        {"rmse", p.rmse},
                        {"rmse_se", p.rmse_se},
                        {"trials", p.trials}});
    }
    out["validation"] = points;
  }
  return out;
}

void write_selection_csv(std::ostream& out, const RunReport& report) {
  const Scenario& s = report.config.scenario;
  out << "sensor_index,x,y,w_relaxed,w_boolean\n";
  for (Eigen::Index m = 0; m < report.w_relaxed.size(); ++m) {
    out << m << ',';
    const auto idx = static_cast<std::size_t>(m);
    if (idx < s.sensors.size() && s.sensors[idx].size() >= 2) {
      out << fmt(s.sensors[idx][0]) << ',' << fmt(s.sensors[idx][1]);
    } else {
      out << ',';
    }
    out << ',' << fmt(report.w_relaxed[m]) << ',';
    if (report.w_boolean) out << static_cast<int>((*report.w_boolean)[m]);
    out << '\n';
  }
}

void write_placement_svg(std::ostream& out, const RunReport& report) {
  const Scenario& s = report.config.scenario;
  std::vector<Vector> all;
  for (const Vector& p : s.sensors) {
    if (p.size() >= 2) all.push_back(p.head(2));
  }
  for (const Vector& p : s.grid.points) {
    if (p.size() >= 2) all.push_back(p.head(2));
  }
  constexpr double size = 640.0;
  constexpr double pad = 30.0;
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (!all.empty()) {
    x0 = x1 = all.front()[0];
    y0 = y1 = all.front()[1];
    for (const Vector& p : all) {
      x0 = std::min(x0, p[0]);
      x1 = std::max(x1, p[0]);
      y0 = std::min(y0, p[1]);
      y1 = std::max(y1, p[1]);
    }
  }
  const double span = std::max({x1 - x0, y1 - y0, 1e-9});
  auto px = [&](double x) { return pad + (x - x0) / span * (size - 2 * pad); };
  auto py = [&](double y) { return size - pad - (y - y0) / span * (size - 2 * pad); };

  out << std::fixed << std::setprecision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g id=\"grid\" fill=\"none\" stroke=\"#1f77b4\">\n";
  for (const Vector& p : s.grid.points) {
    if (p.size() < 2) continue;
    out << "<circle cx=\"" << px(p[0]) << "\" cy=\"" << py(p[1]) << "\" r=\"3\"/>\n";
  }
  out << "</g>\n<g id=\"sensors\" fill=\"none\" stroke=\"#555555\">\n";
  for (const Vector& p : s.sensors) {
    if (p.size() < 2) continue;
    out << "<rect x=\"" << px(p[0]) - 4 << "\" y=\"" << py(p[1]) - 4
        << "\" width=\"8\" height=\"8\"/>\n";
  }
  out << "</g>\n<g id=\"selected\" fill=\"#d62728\" stroke=\"#d62728\">\n";
  const Selection chosen = reported_selection(report);
  for (std::size_t m : selected_indices(chosen)) {
    if (m >= s.sensors.size() || s.sensors[m].size() < 2) continue;
    const double cx = px(s.sensors[m][0]);
    const double cy = py(s.sensors[m][1]);
    out << "<polygon points=\"";
    for (int k = 0; k < 10; ++k) {
      const double r = k % 2 == 0 ? 7.0 : 3.0;
      const double a = -M_PI / 2 + k * M_PI / 5;
      out << (k ? " " : "") << cx + r * std::cos(a) << ',' << cy + r * std::sin(a);
    }
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

void emit_outputs(const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("selection.csv");
    write_selection_csv(f, report);
  }
  {
    auto f = open("report.json");
    f << report_to_json(report).dump(2) << '\n';
  }
  {
    auto f = open("placement.svg");
    write_placement_svg(f, report);
  }
  if (!report.validation.empty()) {
    auto f = open("validation.csv");
    write_validation_csv(f, report.validation);
  }
}

std::vector<SweepRow> run_sweep(const RunConfig& config) {
  if (config.sweep_radii.empty()) throw ConfigError("sweep needs at least one radius");
  if (!config.accuracy) throw ConfigError("sweep needs 'selection.accuracy'");
  std::vector<std::future<SweepRow>> jobs;
  for (double radius : config.sweep_radii) {
    jobs.push_back(std::async(std::launch::async, [config, radius] {
      RunConfig cfg = config;
      cfg.threshold.reset();
      cfg.accuracy->radius = radius;
      cfg.validate = false;
      try {
        const RunReport report = run(cfg);
        SweepRow row;
        row.radius = radius;
        row.threshold = report.threshold;
        row.relaxed_objective = report.relaxed_objective;
        row.cardinality = report.cardinality;
        row.selected = selected_indices(reported_selection(report));
        return row;
      } catch (Error& e) {
        e.prepend("radius " + fmt(radius));
        throw;
      }
    }));
  }
  std::vector<SweepRow> rows;
  for (auto& job : jobs) rows.push_back(job.get());
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "radius,threshold,relaxed_objective,cardinality,selected\n";
  for (const SweepRow& row : rows) {
    out << fmt(row.radius) << ',' << fmt(row.threshold) << ',' << fmt(row.relaxed_objective) << ','
        << row.cardinality << ',';
    for (std::size_t i = 0; i < row.selected.size(); ++i) out << (i ? " " : "") << row.selected[i];
    out << '\n';
  }
}

OracleResult run_oracle(const RunConfig& config) {
  const FimAtomSet atoms = stage("assemble", [&] { return assemble_atoms(config.scenario); });
  const Constraint c = stage("thresholds", [&] { return make_constraint(config); });
  return stage("oracle", [&] { return brute_force_min_card(atoms, c); });
}

Topology load_topology(const std::string& spec, std::size_t nodes) {
  if (spec == "ring") return ring_topology(nodes);
  if (spec == "complete") return complete_topology(nodes);
  std::ifstream in(spec);
  if (!in) throw ConfigError("cannot open topology file '" + spec + "'");
  try {
    Topology topo = read_edge_list(in, nodes);
    if (topo.nodes != nodes) {
      throw ConfigError("topology has " + std::to_string(topo.nodes) + " nodes, expected " +
                        std::to_string(nodes));
    }
    return topo;
  } catch (Error& e) {
    e.prepend(spec);
    throw;
  }
}

DistributedResult run_distributed_config(const RunConfig& config) {
  const FimAtomSet atoms = stage("assemble", [&] { return assemble_atoms(config.scenario); });
  const Constraint c = stage("thresholds", [&] { return make_constraint(config); });
  const Topology topo = stage("topology", [&] {
    return load_topology(config.distributed.topology, atoms.sensors());
  });
  return stage("distributed", [&] {
    DistributedParams params;
    params.rounds = config.distributed.rounds;
    params.k_max = config.distributed.k_max;
    params.known_card = config.subgradient.known_card;
    return run_distributed(atoms, c, topo, params);
  });
}

nlohmann::json distributed_to_json(const DistributedResult& r) {
  const double rel = r.centralized_objective != 0.0
                         ? std::abs(r.objective - r.centralized_objective) / r.centralized_objective
                         : 0.0;
  return {{"objective", r.objective},
          {"centralized_objective", r.centralized_objective},
          {"relative_difference", rel},
          {"divergence_events", r.divergence_events},
          {"max_iterate_deviation", r.max_iterate_deviation},
          {"w_best", to_json(r.w_best)},
          {"w_final", to_json(r.w)},
          {"centralized_w", to_json(r.centralized.w)}};
}

}  // namespace sensel::harness
