#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adiabatica/scenario.hpp"

namespace adiabatica {

struct AssertionResult {
  std::string name;
  double value;
  double threshold;
  bool passed;
};

/// Everything a run computes. Each field comes straight from the library modules.
struct RunResult {
  RunResult(Scenario s, ParameterPath p, LevelTrack t, Trajectory traj)
      : scenario(std::move(s)), path(std::move(p)), track(std::move(t)),
        trajectory(std::move(traj)) {}

  Scenario scenario;
  ParameterPath path;
  LevelTrack track;
  Trajectory trajectory;
  PhaseRecord phases;                // gamma from the overlap route
  std::vector<double> gamma_bohm;    // gamma from the Bohm route
  std::vector<double> bohm_rate;     // d alpha/dt from the Bohm phase-rate formula
  std::vector<double> alpha_rate;    // its time integral
  std::vector<double> separability;
  DriftSeries drift;
  PathConnection connection;
  std::optional<double> gamma_loop;  // Pancharatnam loop phase on closed paths
  double wkb_index = 0.0;
  double eigen_residual = 0.0;       // max over slices of residual / operator scale
  double eigen_qhj = 0.0;            // max over slices of RMS eigenstate QHJ residual
  double eigen_continuity = 0.0;     // max over slices of RMS div J_n
  double connection_mismatch = 0.0;  // max |A_overlap - A_bohm|
  double max_abs_connection = 0.0;   // max over both routes
  std::vector<AssertionResult> assertions;

  bool passed() const;
};

RunResult run_pipeline(const Scenario& scenario);

/// Evaluates the scenario's assertions against a computed result.
std::vector<AssertionResult> evaluate_assertions(const Assertions& a, const RunResult& r);

}  // namespace adiabatica
