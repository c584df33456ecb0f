#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adiabatica/phases.hpp"

namespace adiabatica {

/// Built-in checks a run can self-assert. Unset entries are not checked.
struct Assertions {
  std::optional<double> min_fidelity;            // terminal |<n;T|psi(T)>|
  std::optional<double> max_abs_gamma;           // max_t |gamma(t)|, both routes
  std::optional<double> max_abs_connection;      // max |A_j|, both routes
  std::optional<double> max_route_residual;      // |alpha - delta - gamma| at T
  std::optional<double> max_separability;        // max_t separability deviation
  std::optional<double> max_rho_drift;           // max_t L1 density drift
  std::optional<double> max_q_drift;             // max_t weighted Q drift
  std::optional<double> max_connection_mismatch; // max |A_overlap - A_bohm|
  std::optional<double> max_eigen_continuity;    // max over slices of RMS div J_n
  std::optional<double> gamma_loop;              // expected closed-loop phase, all routes
  double gamma_loop_tol = 1e-2;
  std::optional<double> min_naive_gap;           // |alpha(T) - delta(T)| lower bound

  bool any() const;
};

struct Outputs {
  bool phases = true;
  bool connection = true;
  bool summary = true;
};

/// A fully specified run. Presets fill every field; scenario files override them.
struct Scenario {
  std::string name;
  std::string preset;  // empty for custom systems

  std::string g = "1";
  std::string A = "0";
  std::string V;
  int params = 1;
  PhysicsConfig physics;

  double x_min = -10.0;
  double x_max = 10.0;
  int n = 512;
  Boundary boundary = Boundary::dirichlet;

  // Path: polyline through waypoints with `samples` segments, or explicit (fraction, R) pairs.
  std::vector<ParameterPoint> waypoints;
  int samples = 64;
  std::vector<std::pair<double, ParameterPoint>> explicit_path;

  int level = 0;
  double T = 40.0;
  int steps_per_sample = 64;

  double node_eps = default_node_eps;
  double gap_threshold = 1e-8;
  int k_buffer = 6;
  bool probes = true;
  double probe_step = 0.0;

  Outputs outputs;
  Assertions assertions;

  SpatialGrid grid() const;
  HamiltonianSpec spec() const;
  ParameterPath path() const;
};

/// Reads a YAML scenario. Unknown keys, missing required fields and malformed values raise
/// ConfigError naming the dotted field and the line.
Scenario load_scenario(const std::filesystem::path& file);
Scenario parse_scenario(const std::string& text);

std::vector<std::string> preset_names();
/// Throws ConfigError for unknown names.
Scenario preset(const std::string& name);
/// Human-readable listing with each preset's expressions.
std::string list_presets();

}  // namespace adiabatica
