#pragma once

#include <filesystem>
#include <string>

#include "adiabatica/pipeline.hpp"

namespace adiabatica {

std::string phases_csv(const RunResult& r);
std::string connection_csv(const RunResult& r);
std::string summary_json(const RunResult& r);

/// summary.json body for a run that stopped with an error.
std::string error_json(const std::string& scenario, const std::string& kind,
                       const std::string& message);

/// Writes the requested outputs into `dir`, creating it if needed.
void write_outputs(const RunResult& r, const std::filesystem::path& dir);

void write_text(const std::filesystem::path& file, const std::string& body);

}  // namespace adiabatica
