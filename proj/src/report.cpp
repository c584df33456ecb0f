#include "adiabatica/report.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "adiabatica/error.hpp"

namespace adiabatica {
namespace {

using json = nlohmann::ordered_json;

// Shortest text that round-trips; keeps CSV output bit-reproducible.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{}", v);
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json array(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number_or_null(x));
  return out;
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::isnan(x) ? x : std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::string phases_csv(const RunResult& r) {
  std::string out =
      "# units: t [time]; alpha, delta, gamma [rad]; fidelity [1]; separability [action]; "
      "rho_drift [1]; q_drift [energy]\n"
      "t,alpha,delta,gamma,fidelity,separability,rho_drift,q_drift\n";
  const PhaseRecord& p = r.phases;
  for (std::size_t k = 0; k < p.times.size(); ++k)
    out += fmt::format("{},{},{},{},{},{},{},{}\n", num(p.times[k]), num(p.alpha[k]),
                       num(p.delta[k]), num(p.gamma[k]), num(p.fidelity[k]),
                       num(r.separability[k]), num(r.drift.rho[k]), num(r.drift.Q[k]));
  return out;
}

std::string connection_csv(const RunResult& r) {
  const std::size_t m = r.path.dimension();
  std::string header, units;
  for (std::size_t j = 1; j <= m; ++j) header += fmt::format("R{},", j);
  for (const char* route : {"overlap", "bohm"})
    for (std::size_t j = 1; j <= m; ++j) header += fmt::format("A{}_{},", j, route);
  header.pop_back();
  std::string out = "# units: R [parameter]; A [1/parameter]; one row per path segment midpoint\n" +
                    header + "\n";
  for (std::size_t i = 0; i < r.connection.overlap.size(); ++i) {
    std::string row;
    for (double v : r.connection.overlap[i].R) row += num(v) + ",";
    for (double v : r.connection.overlap[i].A) row += num(v) + ",";
    for (double v : r.connection.bohm[i].A) row += num(v) + ",";
    row.back() = '\n';
    out += row;
  }
  return out;
}

std::string summary_json(const RunResult& r) {
  const Scenario& s = r.scenario;
  const PhaseRecord& p = r.phases;
  const double alpha = p.alpha.back();
  const double delta = p.delta.back();

  json j;
  j["scenario"] = s.name;
  j["preset"] = s.preset.empty() ? json(nullptr) : json(s.preset);
  j["hamiltonian"] = {{"V", s.V}, {"A", s.A}, {"g", s.g}, {"params", s.params}, {"hbar", s.physics.hbar}};
  j["grid"] = {{"x_min", s.x_min}, {"x_max", s.x_max}, {"n", s.n}, {"boundary", std::string(to_string(s.boundary))}};
  j["run"] = {{"T", s.T},
              {"level", s.level},
              {"path_samples", r.path.size()},
              {"closed", r.path.closed()},
              {"steps_per_sample", s.steps_per_sample},
              {"time_steps", r.trajectory.steps}};

  json terminal;
  terminal["t"] = p.times.back();
  terminal["alpha"] = number_or_null(alpha);
  terminal["delta"] = number_or_null(delta);
  terminal["gamma_overlap"] = number_or_null(p.gamma.back());
  terminal["gamma_bohm"] = number_or_null(r.gamma_bohm.back());
  terminal["gamma_loop"] = r.gamma_loop ? json(*r.gamma_loop) : json(nullptr);
  terminal["alpha_bohm_rate"] = number_or_null(r.alpha_rate.back());
  terminal["route_residual_overlap"] = number_or_null(alpha - delta - p.gamma.back());
  terminal["route_residual_bohm"] = number_or_null(alpha - delta - r.gamma_bohm.back());
  terminal["alpha_minus_delta"] = number_or_null(alpha - delta);
  terminal["fidelity"] = number_or_null(p.fidelity.back());
  terminal["separability"] = number_or_null(r.separability.back());
  terminal["rho_drift"] = number_or_null(r.drift.rho.back());
  terminal["q_drift"] = number_or_null(r.drift.Q.back());
  j["terminal"] = terminal;

  j["wkb_index"] = r.wkb_index;
  j["gap_min"] = r.track.min_gap();
  j["tracking"] = {{"min_overlap", r.track.min_overlap()},
                   {"selected_first", r.track.selected.front()},
                   {"selected_last", r.track.selected.back()}};
  j["maxima"] = {{"abs_gamma_overlap", number_or_null(max_of(p.gamma))},
                 {"abs_gamma_bohm", number_or_null(max_of(r.gamma_bohm))},
                 {"separability", number_or_null(max_of(r.separability))},
                 {"rho_drift", number_or_null(max_of(r.drift.rho))},
                 {"q_drift", number_or_null(max_of(r.drift.Q))},
                 {"abs_connection", number_or_null(r.max_abs_connection)},
                 {"connection_mismatch", number_or_null(r.connection_mismatch)}};
  j["diagnostics"] = {{"eigen_residual_relative", r.eigen_residual},
                      {"eigen_qhj_rms", r.eigen_qhj},
                      {"eigen_continuity_rms", r.eigen_continuity},
                      {"step_norm_error_max", r.trajectory.max_step_norm_error},
                      {"bohm_skipped_segments", r.connection.skipped}};
  j["tolerances"] = {{"node_eps", s.node_eps},
                     {"gap_threshold", s.gap_threshold},
                     {"k_buffer", s.k_buffer},
                     {"probes", s.probes},
                     {"probe_step", s.probe_step},
                     {"unwrap_limit", "pi/2"},
                     {"tracking_overlap_min", 0.5},
                     {"step_norm_tolerance", step_norm_tolerance}};
  json asserts = json::array();
  for (const AssertionResult& a : r.assertions)
    asserts.push_back({{"name", a.name},
                       {"value", number_or_null(a.value)},
                       {"threshold", a.threshold},
                       {"passed", a.passed}});
  j["assertions"] = asserts;
  j["series"] = {{"t", array(p.times)},
                 {"gamma_bohm", array(r.gamma_bohm)},
                 {"bohm_rate", array(r.bohm_rate)},
                 {"alpha_bohm_rate", array(r.alpha_rate)}};
  j["passed"] = r.passed();
  j["error"] = nullptr;
  return j.dump(2) + "\n";
}

std::string error_json(const std::string& scenario, const std::string& kind,
                       const std::string& message) {
  json j;
  j["scenario"] = scenario.empty() ? json(nullptr) : json(scenario);
  j["passed"] = false;
  j["error"] = {{"kind", kind}, {"message", message}};
  return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& file, const std::string& body) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("io_error", "cannot write " + file.string());
  out << body;
  if (!out) throw Error("io_error", "failed writing " + file.string());
}

void write_outputs(const RunResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  if (r.scenario.outputs.phases) write_text(dir / "phases.csv", phases_csv(r));
  if (r.scenario.outputs.connection) write_text(dir / "connection.csv", connection_csv(r));
  if (r.scenario.outputs.summary) write_text(dir / "summary.json", summary_json(r));
}

}  // namespace adiabatica
