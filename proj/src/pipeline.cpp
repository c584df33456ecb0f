#include "adiabatica/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adiabatica {
namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::isnan(x) ? x : std::max(m, std::abs(x));
  return m;
}

std::vector<double> integrate_rate(const std::vector<double>& times,
                                   const std::vector<double>& rate) {
  std::vector<double> out(times.size(), 0.0);
  for (std::size_t k = 1; k < times.size(); ++k)
    out[k] = out[k - 1] + 0.5 * (rate[k] + rate[k - 1]) * (times[k] - times[k - 1]);
  return out;
}

AssertionResult at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

AssertionResult at_least(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value >= threshold};
}

}  // namespace

bool RunResult::passed() const {
  return std::all_of(assertions.begin(), assertions.end(),
                     [](const AssertionResult& a) { return a.passed; });
}

std::vector<AssertionResult> evaluate_assertions(const Assertions& a, const RunResult& r) {
  std::vector<AssertionResult> out;
  const double alpha = r.phases.alpha.back();
  const double delta = r.phases.delta.back();
  if (a.min_fidelity) out.push_back(at_least("min_fidelity", r.phases.fidelity.back(), *a.min_fidelity));
  if (a.max_abs_gamma)
    out.push_back(at_most("max_abs_gamma",
                          std::max(max_abs(r.phases.gamma), max_abs(r.gamma_bohm)), *a.max_abs_gamma));
  if (a.max_abs_connection)
    out.push_back(at_most("max_abs_connection", r.max_abs_connection, *a.max_abs_connection));
  if (a.max_route_residual) {
    const double ov = std::abs(alpha - delta - r.phases.gamma.back());
    const double bo = std::abs(alpha - delta - r.gamma_bohm.back());
    out.push_back(at_most("max_route_residual", std::isnan(bo) ? bo : std::max(ov, bo),
                          *a.max_route_residual));
  }
  if (a.max_separability)
    out.push_back(at_most("max_separability", max_abs(r.separability), *a.max_separability));
  if (a.max_rho_drift) out.push_back(at_most("max_rho_drift", max_abs(r.drift.rho), *a.max_rho_drift));
  if (a.max_q_drift) out.push_back(at_most("max_q_drift", max_abs(r.drift.Q), *a.max_q_drift));
  if (a.max_connection_mismatch)
    out.push_back(at_most("max_connection_mismatch", r.connection_mismatch, *a.max_connection_mismatch));
  if (a.max_eigen_continuity)
    out.push_back(at_most("max_eigen_continuity", r.eigen_continuity, *a.max_eigen_continuity));
  if (a.gamma_loop) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.push_back(at_most("gamma_loop_overlap_error", std::abs(r.phases.gamma.back() - *a.gamma_loop),
                          a.gamma_loop_tol));
    out.push_back(at_most("gamma_loop_bohm_error", std::abs(r.gamma_bohm.back() - *a.gamma_loop),
                          a.gamma_loop_tol));
    out.push_back(at_most("gamma_loop_pancharatnam_error",
                          r.gamma_loop ? std::abs(*r.gamma_loop - *a.gamma_loop) : nan,
                          a.gamma_loop_tol));
  }
  if (a.min_naive_gap) out.push_back(at_least("min_naive_gap", std::abs(alpha - delta), *a.min_naive_gap));
  return out;
}

RunResult run_pipeline(const Scenario& scenario) {
  const HamiltonianSpec spec = scenario.spec();
  const SpatialGrid& grid = spec.grid;
  const double hbar = spec.physics.hbar;
  ParameterPath path = scenario.path();

  LevelTrack track = track_level(spec, path, scenario.level,
                                 TrackOptions{scenario.k_buffer, scenario.gap_threshold});
  Trajectory trajectory = evolve(spec, path, track.level(0).state, scenario.steps_per_sample);

  RunResult r(scenario, path, std::move(track), std::move(trajectory));
  const std::vector<Eigenstate> levels = r.track.levels();

  r.phases = overlap_phase(r.trajectory, levels, grid);
  r.phases.delta = dynamical_phase(path.times(), r.track.energies(), hbar);

  ConnectionOptions copts;
  copts.probes = scenario.probes;
  copts.probe_step = scenario.probe_step;
  copts.node_eps = scenario.node_eps;
  copts.k_buffer = scenario.k_buffer;
  r.connection = path_connection(spec, path, r.track, copts);
  r.phases.gamma = geometric_phase(r.connection.overlap, r.connection.segments, path);
  r.gamma_bohm = geometric_phase(r.connection.bohm, r.connection.segments, path);
  if (!r.connection.skipped.empty())
    std::fill(r.gamma_bohm.begin() + static_cast<long>(r.connection.skipped.front()) + 1,
              r.gamma_bohm.end(), std::numeric_limits<double>::quiet_NaN());

  if (path.closed() && r.connection.overlap.size() > 0) {
    std::vector<ComplexField> loop;
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) loop.push_back(levels[k].state);
    r.gamma_loop = loop_phase_pancharatnam(loop, grid, r.phases.gamma.back());
  }

  r.bohm_rate = phase_rate_series(r.track, grid, hbar, scenario.node_eps);
  r.alpha_rate = integrate_rate(path.times(), r.bohm_rate);

  const MadelungFields initial = decompose(levels.front().state, grid, spec.physics, scenario.node_eps);
  std::vector<double> f(r.phases.delta.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = hbar * r.phases.delta[k];
  r.separability = separability_check(r.trajectory, initial, f, scenario.node_eps);
  r.drift = rho_q_drift(r.trajectory, spec, path, scenario.node_eps);
  r.wkb_index = wkb_index(levels.front().state, spec, path.point(0), 0.0, scenario.node_eps);

  for (std::size_t k = 0; k < levels.size(); ++k) {
    const SpectrumSlice& slice = r.track.slices[k];
    r.eigen_residual = std::max(r.eigen_residual, slice.residual / slice.scale);
    const MadelungFields fk = analyze(levels[k].state, spec, levels[k].R, levels[k].t, scenario.node_eps);
    r.eigen_qhj = std::max(r.eigen_qhj,
                           weighted_rms(qhj_residual(fk, spec, levels[k].R, levels[k].energy, levels[k].t), fk));
    r.eigen_continuity = std::max(r.eigen_continuity, weighted_rms(continuity_residual(fk, {}), fk));
  }

  for (std::size_t i = 0; i < r.connection.overlap.size(); ++i) {
    for (std::size_t j = 0; j < r.connection.overlap[i].A.size(); ++j) {
      const double ov = r.connection.overlap[i].A[j];
      const double bo = r.connection.bohm[i].A[j];
      if (!std::isnan(ov)) r.max_abs_connection = std::max(r.max_abs_connection, std::abs(ov));
      if (!std::isnan(bo)) r.max_abs_connection = std::max(r.max_abs_connection, std::abs(bo));
      if (!std::isnan(ov) && !std::isnan(bo))
        r.connection_mismatch = std::max(r.connection_mismatch, std::abs(ov - bo));
    }
  }
  if (!r.connection.skipped.empty()) r.connection_mismatch = std::numeric_limits<double>::quiet_NaN();

  r.assertions = evaluate_assertions(scenario.assertions, r);
  return r;
}

}  // namespace adiabatica
