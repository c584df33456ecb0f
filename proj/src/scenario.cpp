#include "adiabatica/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "adiabatica/error.hpp"

namespace adiabatica {
namespace {

int line_of(const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  return mark.is_null() ? 0 : mark.line + 1;
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void require_map(const YAML::Node& node, const std::string& field) {
  if (!node.IsMap()) throw ConfigError(field, "expected a mapping", line_of(node));
}

// Rejects keys outside `allowed`; typos must not pass silently.
void check_keys(const YAML::Node& node, const std::string& prefix,
                std::initializer_list<const char*> allowed) {
  require_map(node, prefix.empty() ? "scenario" : prefix);
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) throw ConfigError(join(prefix, key), "unknown key", line_of(kv.first));
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& field, const char* expected) {
  if (!node.IsScalar()) throw ConfigError(field, std::string("expected ") + expected, line_of(node));
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(field, std::string("expected ") + expected + ", got '" + node.Scalar() + "'",
                      line_of(node));
  }
}

double real(const YAML::Node& node, const std::string& field) {
  return scalar<double>(node, field, "a number");
}

int integer(const YAML::Node& node, const std::string& field) {
  return scalar<int>(node, field, "an integer");
}

bool boolean(const YAML::Node& node, const std::string& field) {
  return scalar<bool>(node, field, "true or false");
}

std::string text(const YAML::Node& node, const std::string& field) {
  return scalar<std::string>(node, field, "a string");
}

ParameterPoint point(const YAML::Node& node, const std::string& field) {
  if (node.IsScalar()) return {real(node, field)};
  if (!node.IsSequence() || node.size() == 0)
    throw ConfigError(field, "expected a number or a list of numbers", line_of(node));
  ParameterPoint p;
  for (std::size_t i = 0; i < node.size(); ++i)
    p.push_back(real(node[i], field + "[" + std::to_string(i) + "]"));
  return p;
}

void read_hamiltonian(const YAML::Node& node, Scenario& s, std::set<std::string>& seen) {
  check_keys(node, "hamiltonian", {"g", "A", "V", "params"});
  if (node["g"]) s.g = text(node["g"], "hamiltonian.g");
  if (node["A"]) s.A = text(node["A"], "hamiltonian.A");
  if (node["V"]) {
    s.V = text(node["V"], "hamiltonian.V");
    seen.insert("hamiltonian.V");
  }
  if (node["params"]) {
    s.params = integer(node["params"], "hamiltonian.params");
    seen.insert("hamiltonian.params");
  }
}

void read_grid(const YAML::Node& node, Scenario& s, std::set<std::string>& seen) {
  check_keys(node, "grid", {"x_min", "x_max", "n", "boundary"});
  if (node["x_min"]) {
    s.x_min = real(node["x_min"], "grid.x_min");
    seen.insert("grid.x_min");
  }
  if (node["x_max"]) {
    s.x_max = real(node["x_max"], "grid.x_max");
    seen.insert("grid.x_max");
  }
  if (node["n"]) {
    s.n = integer(node["n"], "grid.n");
    seen.insert("grid.n");
  }
  if (node["boundary"]) {
    try {
      s.boundary = parse_boundary(text(node["boundary"], "grid.boundary"));
    } catch (const InvalidArgument& e) {
      throw ConfigError("grid.boundary", e.what(), line_of(node["boundary"]));
    }
  }
}

void read_path(const YAML::Node& node, Scenario& s, std::set<std::string>& seen) {
  check_keys(node, "path", {"waypoints", "samples", "explicit"});
  if (node["waypoints"] && node["explicit"])
    throw ConfigError("path", "give either waypoints or explicit samples, not both", line_of(node));
  if (node["waypoints"]) {
    const YAML::Node w = node["waypoints"];
    if (!w.IsSequence() || w.size() == 0)
      throw ConfigError("path.waypoints", "expected a non-empty list", line_of(w));
    s.waypoints.clear();
    s.explicit_path.clear();
    for (std::size_t i = 0; i < w.size(); ++i)
      s.waypoints.push_back(point(w[i], "path.waypoints[" + std::to_string(i) + "]"));
    seen.insert("path");
  }
  if (node["samples"]) s.samples = integer(node["samples"], "path.samples");
  if (node["explicit"]) {
    const YAML::Node e = node["explicit"];
    if (!e.IsSequence() || e.size() < 2)
      throw ConfigError("path.explicit", "expected a list of at least two [s, R...] rows",
                        line_of(e));
    s.waypoints.clear();
    s.explicit_path.clear();
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string field = "path.explicit[" + std::to_string(i) + "]";
      ParameterPoint row = point(e[i], field);
      if (row.size() < 2) throw ConfigError(field, "expected [s, R1, ...]", line_of(e[i]));
      const double fraction = row.front();
      if (fraction < 0.0 || fraction > 1.0)
        throw ConfigError(field, "s must lie in [0, 1]", line_of(e[i]));
      s.explicit_path.emplace_back(fraction, ParameterPoint(row.begin() + 1, row.end()));
    }
    seen.insert("path");
  }
}

void read_tolerances(const YAML::Node& node, Scenario& s) {
  check_keys(node, "tolerances", {"node_eps", "gap_threshold", "k_buffer", "probes", "probe_step"});
  if (node["node_eps"]) s.node_eps = real(node["node_eps"], "tolerances.node_eps");
  if (node["gap_threshold"]) s.gap_threshold = real(node["gap_threshold"], "tolerances.gap_threshold");
  if (node["k_buffer"]) s.k_buffer = integer(node["k_buffer"], "tolerances.k_buffer");
  if (node["probes"]) s.probes = boolean(node["probes"], "tolerances.probes");
  if (node["probe_step"]) s.probe_step = real(node["probe_step"], "tolerances.probe_step");
}

void read_outputs(const YAML::Node& node, Scenario& s) {
  check_keys(node, "outputs", {"phases", "connection", "summary"});
  if (node["phases"]) s.outputs.phases = boolean(node["phases"], "outputs.phases");
  if (node["connection"]) s.outputs.connection = boolean(node["connection"], "outputs.connection");
  if (node["summary"]) s.outputs.summary = boolean(node["summary"], "outputs.summary");
}

void read_assertions(const YAML::Node& node, Scenario& s) {
  if (node.IsNull()) {
    s.assertions = {};
    return;
  }
  check_keys(node, "assertions",
             {"min_fidelity", "max_abs_gamma", "max_abs_connection", "max_route_residual",
              "max_separability", "max_rho_drift", "max_q_drift", "max_connection_mismatch",
              "max_eigen_continuity", "gamma_loop", "gamma_loop_tol", "min_naive_gap"});
  Assertions& a = s.assertions;
  auto opt = [&](const char* key, std::optional<double>& slot) {
    if (!node[key]) return;
    if (node[key].IsNull()) slot.reset();
    else slot = real(node[key], std::string("assertions.") + key);
  };
  opt("min_fidelity", a.min_fidelity);
  opt("max_abs_gamma", a.max_abs_gamma);
  opt("max_abs_connection", a.max_abs_connection);
  opt("max_route_residual", a.max_route_residual);
  opt("max_separability", a.max_separability);
  opt("max_rho_drift", a.max_rho_drift);
  opt("max_q_drift", a.max_q_drift);
  opt("max_connection_mismatch", a.max_connection_mismatch);
  opt("max_eigen_continuity", a.max_eigen_continuity);
  opt("gamma_loop", a.gamma_loop);
  opt("min_naive_gap", a.min_naive_gap);
  if (node["gamma_loop_tol"]) a.gamma_loop_tol = real(node["gamma_loop_tol"], "assertions.gamma_loop_tol");
}

// Cross-field checks once everything is merged.
void validate(const Scenario& s) {
  if (s.V.empty()) throw ConfigError("hamiltonian.V", "required");
  if (s.n < 8) throw ConfigError("grid.n", "must be at least 8");
  if (!(s.x_min < s.x_max)) throw ConfigError("grid.x_max", "must exceed grid.x_min");
  if (!(s.physics.hbar > 0.0)) throw ConfigError("physics.hbar", "must be positive");
  if (!(s.T > 0.0)) throw ConfigError("T", "must be positive");
  if (s.steps_per_sample < 1) throw ConfigError("steps_per_sample", "must be at least 1");
  if (s.k_buffer < 1) throw ConfigError("tolerances.k_buffer", "must be at least 1");
  if (s.level < 0 || s.level >= s.k_buffer)
    throw ConfigError("level", "must satisfy 0 <= level < tolerances.k_buffer");
  if (!(s.node_eps > 0.0)) throw ConfigError("tolerances.node_eps", "must be positive");
  if (!(s.gap_threshold >= 0.0)) throw ConfigError("tolerances.gap_threshold", "must be >= 0");
  if (s.samples < 1) throw ConfigError("path.samples", "must be at least 1");
  if (s.waypoints.empty() && s.explicit_path.empty()) throw ConfigError("path", "required");
  if (s.params < 1) throw ConfigError("hamiltonian.params", "must be at least 1");
  const std::size_t dim = s.waypoints.empty() ? s.explicit_path.front().second.size()
                                              : s.waypoints.front().size();
  if (dim < static_cast<std::size_t>(s.params))
    throw ConfigError("path", "points have fewer coordinates than hamiltonian.params");
  try {
    (void)s.spec();
    (void)s.path();
  } catch (const ParseError& e) {
    throw ConfigError("hamiltonian", e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError("scenario", e.what());
  }
}

}  // namespace

bool Assertions::any() const {
  return min_fidelity || max_abs_gamma || max_abs_connection || max_route_residual ||
         max_separability || max_rho_drift || max_q_drift || max_connection_mismatch ||
         max_eigen_continuity || gamma_loop || min_naive_gap;
}

SpatialGrid Scenario::grid() const { return make_grid(x_min, x_max, n, boundary); }

HamiltonianSpec Scenario::spec() const {
  return HamiltonianSpec::from_strings(g, A, V, params, physics, grid());
}

ParameterPath Scenario::path() const {
  if (!explicit_path.empty()) return ParameterPath::explicit_samples(explicit_path, T);
  return ParameterPath::polyline(waypoints, samples, T);
}

Scenario parse_scenario(const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(source);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("", "YAML syntax error: " + e.msg, e.mark.line + 1);
  }
  if (!root || root.IsNull()) throw ConfigError("", "empty scenario file");
  check_keys(root, "",
             {"name", "preset", "hamiltonian", "physics", "grid", "path", "level", "T",
              "steps_per_sample", "tolerances", "outputs", "assertions"});

  Scenario s;
  std::set<std::string> seen;
  if (root["preset"]) {
    const std::string name = text(root["preset"], "preset");
    try {
      s = preset(name);
    } catch (const ConfigError& e) {
      throw ConfigError("preset", e.what(), line_of(root["preset"]));
    }
  }
  const bool custom = s.preset.empty();

  if (root["name"]) s.name = text(root["name"], "name");
  if (root["hamiltonian"]) read_hamiltonian(root["hamiltonian"], s, seen);
  if (root["physics"]) {
    check_keys(root["physics"], "physics", {"hbar"});
    if (root["physics"]["hbar"]) s.physics.hbar = real(root["physics"]["hbar"], "physics.hbar");
  }
  if (root["grid"]) read_grid(root["grid"], s, seen);
  if (root["path"]) read_path(root["path"], s, seen);
  if (root["level"]) s.level = integer(root["level"], "level");
  if (root["T"]) s.T = real(root["T"], "T");
  if (root["steps_per_sample"]) s.steps_per_sample = integer(root["steps_per_sample"], "steps_per_sample");
  if (root["tolerances"]) read_tolerances(root["tolerances"], s);
  if (root["outputs"]) read_outputs(root["outputs"], s);
  if (root["assertions"]) read_assertions(root["assertions"], s);

  if (custom) {
    for (const char* key : {"hamiltonian.V", "grid.x_min", "grid.x_max", "grid.n", "path"})
      if (!seen.count(key)) throw ConfigError(key, "required for scenarios without a preset");
    if (!root["T"]) throw ConfigError("T", "required for scenarios without a preset");
    if (!seen.count("hamiltonian.params")) {
      s.params = static_cast<int>(s.waypoints.empty() ? s.explicit_path.front().second.size()
                                                      : s.waypoints.front().size());
    }
  }
  if (s.name.empty()) s.name = custom ? "custom" : s.preset;
  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("", "cannot open scenario file " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

}  // namespace adiabatica
