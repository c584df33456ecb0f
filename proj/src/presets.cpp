#include <fmt/format.h>

#include "adiabatica/error.hpp"
#include "adiabatica/scenario.hpp"

namespace adiabatica {
namespace {

Scenario base(const std::string& name, std::string V, std::string A, int params) {
  Scenario s;
  s.name = name;
  s.preset = name;
  s.V = std::move(V);
  s.A = std::move(A);
  s.g = "1";
  s.params = params;
  s.x_min = -10.0;
  s.x_max = 10.0;
  s.n = 512;
  s.boundary = Boundary::dirichlet;
  s.samples = 64;
  s.T = 40.0;
  s.steps_per_sample = 64;
  return s;
}

Scenario make_static() {
  Scenario s = base("static", "0.5*x^2", "0", 1);
  s.waypoints = {{0.0}};
  Assertions& a = s.assertions;
  a.min_fidelity = 1.0 - 1e-8;
  a.max_abs_gamma = 1e-10;
  a.max_route_residual = 1e-4;
  a.max_separability = 1e-6;
  a.max_rho_drift = 1e-8;
  a.max_q_drift = 1e-8;
  a.max_eigen_continuity = 1e-6;
  return s;
}

Scenario make_moving_well() {
  Scenario s = base("moving_well", "0.5*(x-R1)^2", "0", 1);
  s.waypoints = {{0.0}, {1.0}};
  Assertions& a = s.assertions;
  a.min_fidelity = 0.999;
  a.max_abs_gamma = 1e-6;
  a.max_abs_connection = 1e-8;
  a.max_route_residual = 0.02;
  a.max_separability = 0.05;
  a.max_connection_mismatch = 1e-4;
  a.max_eigen_continuity = 1e-6;
  return s;
}

// Shifted well with a uniform vector potential: ground states e^{i R2 x} phi0(x - R1), whose
// connection (R2, 0) encloses Berry phase -area around a loop.
Scenario make_coherent_loop() {
  Scenario s = base("coherent_loop", "0.5*(x-R1)^2", "R2", 2);
  s.waypoints = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.0, 0.0}};
  Assertions& a = s.assertions;
  a.gamma_loop = -1.0;
  a.gamma_loop_tol = 1e-2;
  a.min_naive_gap = 0.5;
  a.max_connection_mismatch = 1e-4;
  a.max_eigen_continuity = 1e-6;
  return s;
}

// Tilted double well. The tunnelling doublet at R1 = 0 is split by ~4e-4; the ground level is
// followed by overlap through the crossing, i.e. along the state localized in one well.
// 101 segments keep R1 = 0 off the sample grid.
Scenario make_avoided_crossing() {
  Scenario s = base("avoided_crossing", "0.5*(abs(x)-3)^2 + R1*x", "0", 1);
  s.waypoints = {{-0.1}, {0.1}};
  s.samples = 101;
  Assertions& a = s.assertions;
  a.min_fidelity = 0.99;
  a.max_abs_gamma = 1e-6;
  a.max_eigen_continuity = 1e-6;
  return s;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"static", "moving_well", "coherent_loop", "avoided_crossing"};
}

Scenario preset(const std::string& name) {
  if (name == "static") return make_static();
  if (name == "moving_well") return make_moving_well();
  if (name == "coherent_loop") return make_coherent_loop();
  if (name == "avoided_crossing") return make_avoided_crossing();
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

std::string list_presets() {
  std::string out;
  for (const std::string& name : preset_names()) {
    const Scenario s = preset(name);
    std::string path;
    for (const ParameterPoint& p : s.waypoints) {
      path += path.empty() ? "" : " -> ";
      path += "(" + fmt::format("{}", fmt::join(p, ", ")) + ")";
    }
    out += fmt::format("{}\n  V = {}\n  A = {}\n  g = {}\n  path: {} [{} segments], T = {}\n",
                       name, s.V, s.A, s.g, path, s.samples, s.T);
  }
  return out;
}

}  // namespace adiabatica
