#pragma once

#include <string>

#include "polylab/experiments.hpp"

namespace polylab {

inline constexpr const char* kSchemaVersion = "1";

// key = value config files; '#' comments. Unknown keys are rejected by name.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Records CSV, byte-stable across runs and worker counts:
// geometry,body,weight_phi,weight_psi,n,rep,seed,psi_value,hull_vertices
std::string records_csv(const ExperimentResult& result);

// Summary JSON with per-n statistics and the fitted global quantities.
std::string summary_json(const ExperimentResult& result);

void write_file(const std::string& path, const std::string& content);
std::string format_double(double v);  // %.17g round-trip formatting

}  // namespace polylab
