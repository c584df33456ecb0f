// adiabatica: run adiabatic-phase scenarios from YAML files.
//
// Exit codes: 0 all assertions passed, 1 an assertion failed, 2 an error stopped the run.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <optional>

#include "adiabatica/error.hpp"
#include "adiabatica/report.hpp"

namespace fs = std::filesystem;
using namespace adiabatica;

namespace {

constexpr int exit_failed = 1;
constexpr int exit_error = 2;

int run(const fs::path& file, const fs::path& out, std::optional<double> T,
        std::optional<int> level) {
  std::string name;
  try {
    Scenario s = load_scenario(file);
    name = s.name;
    if (T) s.T = *T;
    if (level) s.level = *level;
    if (T || level) {
      // Re-check overrides the same way file values are checked.
      if (!(s.T > 0.0)) throw ConfigError("--T", "must be positive");
      if (s.level < 0 || s.level >= s.k_buffer)
        throw ConfigError("--n", "must satisfy 0 <= n < tolerances.k_buffer");
    }

    const RunResult r = run_pipeline(s);
    write_outputs(r, out);

    const PhaseRecord& p = r.phases;
    fmt::print("{}: T = {}, alpha = {:.6f}, delta = {:.6f}, gamma = {:.6f}, fidelity = {:.6f}\n",
               s.name, s.T, p.alpha.back(), p.delta.back(), p.gamma.back(), p.fidelity.back());
    if (r.gamma_loop) fmt::print("  loop phase (Pancharatnam) = {:.6f}\n", *r.gamma_loop);
    for (const AssertionResult& a : r.assertions)
      fmt::print("  [{}] {} = {:.6g} (threshold {:.6g})\n", a.passed ? "pass" : "FAIL", a.name,
                 a.value, a.threshold);
    fmt::print("outputs written to {}\n", out.string());
    return r.passed() ? 0 : exit_failed;
  } catch (const Error& e) {
    fmt::print(stderr, "error [{}]: {}\n", e.kind(), e.what());
    try {
      fs::create_directories(out);
      write_text(out / "summary.json", error_json(name, e.kind(), e.what()));
    } catch (const std::exception& io) {
      fmt::print(stderr, "could not write error record: {}\n", io.what());
    }
    return exit_error;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adiabatic phases by overlap, Berry connection and Bohm (Madelung) routes"};
  app.require_subcommand(1);

  fs::path file;
  fs::path out = "out";
  std::optional<double> T;
  std::optional<int> level;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario file");
  run_cmd->add_option("scenario", file, "YAML scenario file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out, "Output directory")->capture_default_str();
  run_cmd->add_option("--T", T, "Override the total time T");
  run_cmd->add_option("--n", level, "Override the tracked level");

  CLI::App* presets_cmd = app.add_subcommand("presets", "List built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_error;
  }

  if (presets_cmd->parsed()) {
    fmt::print("{}", list_presets());
    return 0;
  }
  return run(file, out, T, level);
}
