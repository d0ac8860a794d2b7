#include "sensel/harness/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace sensel::harness {

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const YAML::Node& node, const std::string& path, std::set<std::string> allowed) {
  if (!node.IsMap()) throw ConfigError("'" + path + "' must be a mapping");
  for (const auto& item : node) {
    const std::string key = item.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + join(path, key) + "'");
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError("'" + path + "' must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("'" + path + "' has an invalid value '" + node.Scalar() + "'");
  }
}

template <typename T>
void read(const YAML::Node& parent, const std::string& path, const std::string& key, T& out) {
  if (const YAML::Node node = parent[key]) out = scalar<T>(node, join(path, key));
}

template <typename T>
void read(const YAML::Node& parent, const std::string& path, const std::string& key,
          std::optional<T>& out) {
  if (const YAML::Node node = parent[key]) out = scalar<T>(node, join(path, key));
}

std::vector<double> number_list(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) throw ConfigError("'" + path + "' must be a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(scalar<double>(node[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Vector to_vector(const std::vector<double>& values) {
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::vector<Vector> point_list(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) throw ConfigError("'" + path + "' must be a list of points");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(to_vector(number_list(node[i], path + "[" + std::to_string(i) + "]")));
  }
  return out;
}

Matrix matrix(const YAML::Node& node, const std::string& path) {
  const std::vector<Vector> rows = point_list(node, path);
  if (rows.empty()) throw ConfigError("'" + path + "' must not be empty");
  Matrix out(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != out.cols()) throw ConfigError("'" + path + "' rows differ in length");
    out.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return out;
}

Rect rect(const YAML::Node& node, const std::string& path) {
  const std::vector<double> v = number_list(node, path);
  if (v.size() != 4) throw ConfigError("'" + path + "' must be [x_min, x_max, y_min, y_max]");
  return {v[0], v[1], v[2], v[3]};
}

YAML::Node required(const YAML::Node& parent, const std::string& path, const std::string& key) {
  const YAML::Node node = parent[key];
  if (!node) throw ConfigError("missing key '" + join(path, key) + "'");
  return node;
}

ModelParams parse_model(const YAML::Node& node) {
  const std::string kind = scalar<std::string>(required(node, "model", "kind"), "model.kind");
  if (kind == "range") {
    check_keys(node, "model", {"kind", "sigma2", "eta"});
    RangeModel m;
    read(node, "model", "sigma2", m.sigma2);
    read(node, "model", "eta", m.eta);
    return m;
  }
  if (kind == "rss") {
    check_keys(node, "model", {"kind", "sigma_db", "eta", "y0", "d0"});
    RssModel m;
    read(node, "model", "sigma_db", m.sigma_db);
    read(node, "model", "eta", m.eta);
    read(node, "model", "y0", m.y0);
    read(node, "model", "d0", m.d0);
    return m;
  }
  if (kind == "bearing") {
    check_keys(node, "model", {"kind", "sigma2"});
    BearingModel m;
    read(node, "model", "sigma2", m.sigma2);
    return m;
  }
  if (kind == "energy") {
    check_keys(node, "model", {"kind", "energy", "beta", "sigma2"});
    EnergyModel m;
    read(node, "model", "energy", m.energy);
    read(node, "model", "beta", m.beta);
    read(node, "model", "sigma2", m.sigma2);
    return m;
  }
  if (kind == "linear") {
    check_keys(node, "model", {"kind", "regressors", "variances"});
    LinearModel m;
    m.regressors = point_list(required(node, "model", "regressors"), "model.regressors");
    m.variances = number_list(required(node, "model", "variances"), "model.variances");
    return m;
  }
  throw ConfigError("unknown model kind '" + kind +
                    "' (expected range, rss, bearing, energy or linear)");
}

/// Square ring of sensors: `per_side` per side, counter-clockwise from the
/// lower-left corner.
std::vector<Vector> ring_positions(const YAML::Node& node, const std::string& path) {
  check_keys(node, path, {"center", "half_side", "per_side"});
  const std::vector<double> center = number_list(required(node, path, "center"), join(path, "center"));
  if (center.size() != 2) throw ConfigError("'" + join(path, "center") + "' must have two entries");
  const double h = scalar<double>(required(node, path, "half_side"), join(path, "half_side"));
  const int per_side = scalar<int>(required(node, path, "per_side"), join(path, "per_side"));
  if (!(h > 0.0) || per_side < 1) {
    throw ConfigError("'" + path + "' needs half_side > 0 and per_side >= 1");
  }
  std::vector<Vector> out;
  for (int side = 0; side < 4; ++side) {
    for (int j = 0; j < per_side; ++j) {
      const double t = -h + 2.0 * h * j / per_side;
      Vector p(2);
      switch (side) {
        case 0: p << center[0] + t, center[1] - h; break;
        case 1: p << center[0] + h, center[1] + t; break;
        case 2: p << center[0] - t, center[1] + h; break;
        default: p << center[0] - h, center[1] - t; break;
      }
      out.push_back(p);
    }
  }
  return out;
}

std::vector<Vector> parse_sensors(const YAML::Node& node) {
  check_keys(node, "sensors", {"positions", "rings", "lattice"});
  std::vector<Vector> out;
  if (const YAML::Node positions = node["positions"]) {
    out = point_list(positions, "sensors.positions");
  }
  if (const YAML::Node rings = node["rings"]) {
    if (!rings.IsSequence()) throw ConfigError("'sensors.rings' must be a list");
    for (std::size_t i = 0; i < rings.size(); ++i) {
      const auto ring = ring_positions(rings[i], "sensors.rings[" + std::to_string(i) + "]");
      out.insert(out.end(), ring.begin(), ring.end());
    }
  }
  if (const YAML::Node lattice = node["lattice"]) {
    check_keys(lattice, "sensors.lattice", {"area", "resolution"});
    const Rect area = rect(required(lattice, "sensors.lattice", "area"), "sensors.lattice.area");
    const double res = scalar<double>(required(lattice, "sensors.lattice", "resolution"),
                                      "sensors.lattice.resolution");
    const DomainGrid grid = build_grid(area, res);
    out.insert(out.end(), grid.points.begin(), grid.points.end());
  }
  if (out.empty()) throw ConfigError("'sensors' declares no sensor");
  return out;
}

DomainGrid parse_target(const YAML::Node& node) {
  check_keys(node, "target", {"area", "resolution", "points"});
  if (node["points"]) {
    if (node["area"] || node["resolution"]) {
      throw ConfigError("'target' takes either points or area and resolution");
    }
    return grid_from_points(point_list(node["points"], "target.points"));
  }
  const Rect area = rect(required(node, "target", "area"), "target.area");
  const double res = scalar<double>(required(node, "target", "resolution"), "target.resolution");
  return build_grid(area, res);
}

void parse_selection(const YAML::Node& node, RunConfig& config) {
  check_keys(node, "selection",
             {"constraint", "threshold", "accuracy", "solver", "reweight", "rounding", "soft",
              "subgradient", "barrier"});
  if (const YAML::Node kind = node["constraint"]) {
    config.kind = parse_constraint_kind(scalar<std::string>(kind, "selection.constraint"));
  }
  read(node, "selection", "threshold", config.threshold);
  if (const YAML::Node acc = node["accuracy"]) {
    const std::string path = "selection.accuracy";
    check_keys(acc, path, {"radius", "probability", "mean_radius", "xi"});
    AccuracySpec spec;
    spec.radius = scalar<double>(required(acc, path, "radius"), join(path, "radius"));
    spec.probability = scalar<double>(required(acc, path, "probability"), join(path, "probability"));
    read(acc, path, "mean_radius", spec.mean_radius);
    read(acc, path, "xi", spec.xi);
    config.accuracy = spec;
  }
  config.solver = config.kind == ConstraintKind::MinEig ? InnerSolver::Barrier : InnerSolver::Subgradient;
  if (const YAML::Node solver = node["solver"]) {
    config.solver = parse_inner_solver(scalar<std::string>(solver, "selection.solver"));
  }
  if (const YAML::Node rw = node["reweight"]) {
    check_keys(rw, "selection.reweight", {"iterations", "delta", "tie_break"});
    read(rw, "selection.reweight", "iterations", config.reweight_iterations);
    read(rw, "selection.reweight", "delta", config.reweight_delta);
    read(rw, "selection.reweight", "tie_break", config.reweight_tie_break);
  }
  if (const YAML::Node ro = node["rounding"]) {
    check_keys(ro, "selection.rounding", {"candidates", "max_batches"});
    read(ro, "selection.rounding", "candidates", config.rounding.candidates);
    read(ro, "selection.rounding", "max_batches", config.rounding.max_batches);
  }
  read(node, "selection", "soft", config.soft);
  if (const YAML::Node sg = node["subgradient"]) {
    check_keys(sg, "selection.subgradient", {"k_max", "known_card"});
    read(sg, "selection.subgradient", "k_max", config.subgradient.k_max);
    read(sg, "selection.subgradient", "known_card", config.subgradient.known_card);
  }
  if (const YAML::Node b = node["barrier"]) {
    const std::string path = "selection.barrier";
    check_keys(b, path, {"t0", "mu", "gap_tol", "newton_tol", "ls_alpha", "ls_beta", "max_newton"});
    read(b, path, "t0", config.barrier.t0);
    read(b, path, "mu", config.barrier.mu);
    read(b, path, "gap_tol", config.barrier.gap_tol);
    read(b, path, "newton_tol", config.barrier.newton_tol);
    read(b, path, "ls_alpha", config.barrier.ls_alpha);
    read(b, path, "ls_beta", config.barrier.ls_beta);
    read(b, path, "max_newton", config.barrier.max_newton);
  }
}

RunConfig parse_node(const YAML::Node& root, const std::filesystem::path& source) {
  if (!root || !root.IsMap()) throw ConfigError("configuration must be a mapping");
  check_keys(root, "",
             {"model", "dim", "sensors", "target", "prior", "selection", "validation",
              "distributed", "sweep", "seed"});
  RunConfig config;
  config.source = source;
  config.scenario.model = parse_model(required(root, "", "model"));
  validate_model(config.scenario.model);
  if (const auto* linear = std::get_if<LinearModel>(&config.scenario.model)) {
    config.scenario.dim = linear->regressors.empty() ? 0 : static_cast<int>(linear->regressors.front().size());
  }
  read(root, "", "dim", config.scenario.dim);
  if (root["sensors"]) {
    config.scenario.sensors = parse_sensors(root["sensors"]);
  } else if (!std::holds_alternative<LinearModel>(config.scenario.model)) {
    throw ConfigError("missing key 'sensors'");
  }
  if (root["target"]) {
    config.scenario.grid = parse_target(root["target"]);
  } else if (std::holds_alternative<LinearModel>(config.scenario.model)) {
    config.scenario.grid = grid_from_points({Vector::Zero(config.scenario.dim)});
  } else {
    throw ConfigError("missing key 'target'");
  }
  if (const YAML::Node prior = root["prior"]) config.prior = matrix(prior, "prior");
  if (const YAML::Node sel = root["selection"]) parse_selection(sel, config);
  if (const YAML::Node val = root["validation"]) {
    check_keys(val, "validation", {"enabled", "trials", "gauss_newton_iterations"});
    read(val, "validation", "enabled", config.validate);
    read(val, "validation", "trials", config.validation.trials);
    read(val, "validation", "gauss_newton_iterations", config.validation.gauss_newton_iterations);
  }
  if (const YAML::Node dist = root["distributed"]) {
    check_keys(dist, "distributed", {"topology", "rounds", "k_max"});
    read(dist, "distributed", "topology", config.distributed.topology);
    read(dist, "distributed", "rounds", config.distributed.rounds);
    read(dist, "distributed", "k_max", config.distributed.k_max);
    const auto& topo = config.distributed.topology;
    if (topo != "ring" && topo != "complete" && !source.empty() &&
        std::filesystem::path(topo).is_relative()) {
      config.distributed.topology = (source.parent_path() / topo).string();
    }
  }
  if (const YAML::Node sweep = root["sweep"]) {
    check_keys(sweep, "sweep", {"radii"});
    config.sweep_radii = number_list(required(sweep, "sweep", "radii"), "sweep.radii");
  }
  read(root, "", "seed", config.seed);
  validate_scenario(config.scenario);
  return config;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& source) {
  try {
    return parse_node(YAML::Load(text), source);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str(), path);
  } catch (Error& e) {
    e.prepend(path.string());
    throw;
  }
}

double resolve_threshold(const RunConfig& config) {
  if (config.threshold) return *config.threshold;
  if (!config.accuracy) {
    throw ConfigError("selection needs either 'threshold' or 'accuracy'");
  }
  AccuracySpec spec = *config.accuracy;
  spec.dim = config.scenario.dim;
  return thresholds(spec, config.kind);
}

Constraint make_constraint(const RunConfig& config) {
  Constraint c{config.kind, resolve_threshold(config), config.prior};
  validate_constraint(c, static_cast<std::size_t>(config.scenario.dim));
  return c;
}

}  // namespace sensel::harness
